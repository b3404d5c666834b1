"""Simulated network datagram and packet filter rule models."""

import ipaddress
from dataclasses import dataclass, field

from .enums import Proto, Verdict


@dataclass(frozen=True)
class Packet:
    """A datagram arriving at the server.

    Attributes:
        src: Source address as seen by the server
        proto: tcp, udp or icmp
        dport: Destination port (None for icmp)
        payload: Raw octets
        arrival: Virtual arrival time in seconds
        sport: Source port, used to route replies
        tunnel_outer: Outer address when the datagram came out of a tunnel
    """

    src: str
    proto: Proto
    dport: int | None = None
    payload: bytes = b""
    arrival: float = 0.0
    sport: int = 0
    tunnel_outer: str | None = field(default=None, compare=False)

    def __post_init__(self):
        ipaddress.ip_address(self.src)
        if self.proto == Proto.ANY:
            raise ValueError("A packet needs a concrete protocol")
        if self.proto.has_ports and self.dport is None:
            raise ValueError(f"{self.proto.value} packet needs a destination port")


@dataclass(frozen=True)
class FilterRule:
    """One match predicate plus its verdict.

    None for dport or src means "any".
    """

    proto: Proto = Proto.ANY
    dport: int | None = None
    src: str | None = None
    verdict: Verdict = Verdict.ACCEPT

    def __post_init__(self):
        if self.dport is not None:
            if not self.proto.has_ports:
                raise ValueError("--dport is only valid with -p tcp or -p udp")
            if not 0 <= self.dport <= 65535:
                raise ValueError(f"Port out of range: {self.dport}")
        if self.src is not None:
            ipaddress.ip_network(self.src, strict=False)

    @property
    def network(self) -> ipaddress.IPv4Network | ipaddress.IPv6Network | None:
        return None if self.src is None else ipaddress.ip_network(self.src, strict=False)

    def matches(self, packet: Packet) -> bool:
        if self.proto != Proto.ANY and self.proto != packet.proto:
            return False
        if self.dport is not None and self.dport != packet.dport:
            return False
        if self.src is not None and ipaddress.ip_address(packet.src) not in self.network:
            return False
        return True

    @property
    def is_blacklist_drop(self) -> bool:
        """A bare DROP for one source, as inserted by active response."""
        return (
            self.verdict == Verdict.DROP
            and self.proto == Proto.ANY
            and self.dport is None
            and self.src is not None
            and self.network.num_addresses == 1
        )

    def to_dict(self) -> dict:
        return {
            "proto": self.proto.value,
            "dport": self.dport,
            "src": self.src,
            "verdict": self.verdict.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FilterRule":
        return cls(
            proto=Proto(data.get("proto", "any")),
            dport=data.get("dport"),
            src=data.get("src"),
            verdict=Verdict(data["verdict"]),
        )
