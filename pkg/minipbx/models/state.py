"""Persisted admin state.

This module defines PbxState, the container serialized to
.minipbx/state.yaml. It carries everything the admin commands inspect or
mutate between runs: the INPUT chain, the blacklist, live tunnel leases
and the grant table.
"""

from dataclasses import dataclass, field

from .acl import GrantTriple
from .enums import Verdict
from .packet import FilterRule
from .security import BlacklistEntry


@dataclass(frozen=True)
class TunnelLease:
    """A live tunnel session as seen from outside the tunnel layer."""

    user: str
    address: str
    established_at: float
    outer: str = ""

    def to_dict(self) -> dict:
        return {
            "user": self.user,
            "address": self.address,
            "established_at": self.established_at,
            "outer": self.outer,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TunnelLease":
        return cls(
            user=data["user"],
            address=data["address"],
            established_at=float(data.get("established_at", 0.0)),
            outer=data.get("outer", ""),
        )


@dataclass
class PbxState:
    """Admin-visible state of one PBX instance.

    Attributes:
        policy: Default verdict of the INPUT chain
        rules: INPUT chain rules, evaluation order
        blacklist: Blocked sources keyed by address
        tunnels: Live tunnel leases
        grants: Stored privilege triples
        shadows: Revoke shadows masking parts of broader grants
        passwords: MD5 digests of principal passwords keyed by user@host
    """

    policy: Verdict = Verdict.ACCEPT
    rules: list[FilterRule] = field(default_factory=list)
    blacklist: dict[str, BlacklistEntry] = field(default_factory=dict)
    tunnels: list[TunnelLease] = field(default_factory=list)
    grants: set[GrantTriple] = field(default_factory=set)
    shadows: set[GrantTriple] = field(default_factory=set)
    passwords: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert to dictionary for YAML serialization.

        Chain rules keep evaluation order; every other collection is sorted
        for deterministic output.
        """
        return {
            "chain": {
                "name": "INPUT",
                "policy": self.policy.value,
                "rules": [rule.to_dict() for rule in self.rules],
            },
            "blacklist": [self.blacklist[src].to_dict() for src in sorted(self.blacklist)],
            "tunnels": [
                lease.to_dict() for lease in sorted(self.tunnels, key=lambda l: l.user)
            ],
            "grants": [triple.to_dict() for triple in sorted(self.grants)],
            "shadows": [triple.to_dict() for triple in sorted(self.shadows)],
            "passwords": dict(sorted(self.passwords.items())),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PbxState":
        chain = data.get("chain") or {}
        entries = [BlacklistEntry.from_dict(e) for e in data.get("blacklist") or []]
        return cls(
            policy=Verdict(chain.get("policy", "ACCEPT")),
            rules=[FilterRule.from_dict(r) for r in chain.get("rules") or []],
            blacklist={entry.src: entry for entry in entries},
            tunnels=[TunnelLease.from_dict(t) for t in data.get("tunnels") or []],
            grants={GrantTriple.from_dict(g) for g in data.get("grants") or []},
            shadows={GrantTriple.from_dict(s) for s in data.get("shadows") or []},
            passwords=dict(data.get("passwords") or {}),
        )
