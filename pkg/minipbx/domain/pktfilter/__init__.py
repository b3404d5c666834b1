"""First-match packet filter with iptables-style mutation."""

from minipbx.domain.pktfilter.chain import (
    Chain,
    PacketFilter,
    Refusal,
    evaluate,
    first_match,
    mutate,
    source_is,
)
from minipbx.domain.pktfilter.iptables import (
    RuleCommand,
    dump_chain,
    format_rule,
    parse_rule_args,
    parse_rule_command,
)
from minipbx.domain.pktfilter.policy import (
    ADMITTED_TCP_PORTS,
    ADMITTED_UDP_PORTS,
    POLICY_COMMANDS,
    apply_commands,
    default_chain,
)

__all__ = [
    "ADMITTED_TCP_PORTS",
    "ADMITTED_UDP_PORTS",
    "POLICY_COMMANDS",
    "Chain",
    "PacketFilter",
    "Refusal",
    "RuleCommand",
    "apply_commands",
    "default_chain",
    "dump_chain",
    "evaluate",
    "first_match",
    "format_rule",
    "mutate",
    "parse_rule_args",
    "parse_rule_command",
    "source_is",
]
