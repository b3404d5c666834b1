"""Ordered first-match packet filter chain.

Chain values are immutable; `mutate` returns a new chain. PacketFilter is
the single owner that applies mutations and evaluates packets.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field, replace

from minipbx.models.enums import ChainOp, Verdict
from minipbx.models.packet import FilterRule, Packet

logger = logging.getLogger(__name__)

RulePredicate = Callable[[FilterRule], bool]


@dataclass(frozen=True)
class Chain:
    """Named rule list with a default policy."""

    name: str = "INPUT"
    rules: tuple[FilterRule, ...] = ()
    policy: Verdict = Verdict.ACCEPT


@dataclass(frozen=True)
class Refusal:
    """Notice sent back to the source of a REJECTed packet."""

    to: str
    at: float
    rule: FilterRule


def mutate(
    chain: Chain,
    op: ChainOp,
    rule: FilterRule | None = None,
    predicate: RulePredicate | None = None,
) -> Chain:
    """Apply one chain operation.

    insert-head puts `rule` at position 1 (iptables -I), append adds it at
    the end (-A) and delete-matching removes every rule satisfying
    `predicate`.
    """
    if op == ChainOp.INSERT_HEAD:
        if rule is None:
            raise ValueError("insert-head needs a rule")
        return replace(chain, rules=(rule, *chain.rules))
    if op == ChainOp.APPEND:
        if rule is None:
            raise ValueError("append needs a rule")
        return replace(chain, rules=(*chain.rules, rule))
    if predicate is None:
        raise ValueError("delete-matching needs a predicate")
    return replace(chain, rules=tuple(r for r in chain.rules if not predicate(r)))


def first_match(chain: Chain, packet: Packet) -> tuple[int, FilterRule] | None:
    """Index and rule of the first matching rule, None when nothing matches."""
    for index, rule in enumerate(chain.rules):
        if rule.matches(packet):
            return index, rule
    return None


def evaluate(chain: Chain, packet: Packet) -> Verdict:
    hit = first_match(chain, packet)
    return chain.policy if hit is None else hit[1].verdict


def source_is(src: str) -> RulePredicate:
    """Predicate selecting the rules bound to exactly this source."""
    return lambda rule: rule.src is not None and rule.network.num_addresses == 1 and (
        str(rule.network.network_address) == src
    )


@dataclass
class PacketFilter:
    """Owner of the INPUT chain."""

    chain: Chain = field(default_factory=Chain)
    refusals: list[Refusal] = field(default_factory=list)

    def insert(self, rule: FilterRule) -> None:
        self.chain = mutate(self.chain, ChainOp.INSERT_HEAD, rule)

    def append(self, rule: FilterRule) -> None:
        self.chain = mutate(self.chain, ChainOp.APPEND, rule)

    def delete_matching(self, predicate: RulePredicate) -> int:
        """Remove matching rules, returning how many were removed."""
        before = len(self.chain.rules)
        self.chain = mutate(self.chain, ChainOp.DELETE_MATCHING, predicate=predicate)
        return before - len(self.chain.rules)

    def delete_rule(self, rule: FilterRule) -> int:
        return self.delete_matching(lambda r: r == rule)

    def classify(self, packet: Packet) -> tuple[Verdict, FilterRule | None]:
        """Verdict plus the deciding rule (None for the default policy).

        A REJECT records a refusal notice for the sender.
        """
        hit = first_match(self.chain, packet)
        rule = None if hit is None else hit[1]
        verdict = self.chain.policy if rule is None else rule.verdict
        if verdict == Verdict.REJECT:
            self.refusals.append(Refusal(packet.src, packet.arrival, rule))
        logger.debug(
            "%s %s/%s from %s -> %s", self.chain.name, packet.proto.value, packet.dport, packet.src, verdict.value
        )
        return verdict, rule

    def evaluate(self, packet: Packet) -> Verdict:
        return self.classify(packet)[0]

    @property
    def rules(self) -> tuple[FilterRule, ...]:
        return self.chain.rules

    def has_drop_for(self, src: str) -> bool:
        return any(rule.is_blacklist_drop and source_is(src)(rule) for rule in self.chain.rules)
