"""iptables-style rule text: command parser and chain dump.

Accepted command shape:

    [iptables] -I|-A|-D INPUT [-p PROTO] [--dport N] [-s SRC] -j VERDICT

`-dport` (single dash) is accepted as a synonym of `--dport`.
"""

import shlex
from dataclasses import dataclass

from minipbx.models.enums import ChainOp, Proto, Verdict
from minipbx.models.packet import FilterRule

from .chain import Chain

_OPS = {
    "-I": ChainOp.INSERT_HEAD,
    "--insert": ChainOp.INSERT_HEAD,
    "-A": ChainOp.APPEND,
    "--append": ChainOp.APPEND,
    "-D": ChainOp.DELETE_MATCHING,
    "--delete": ChainOp.DELETE_MATCHING,
}
_PROTO_FLAGS = ("-p", "--protocol")
_DPORT_FLAGS = ("--dport", "-dport", "--destination-port")
_SRC_FLAGS = ("-s", "--src", "--source")
_JUMP_FLAGS = ("-j", "--jump")


@dataclass(frozen=True)
class RuleCommand:
    """One parsed command line."""

    op: ChainOp
    chain: str
    rule: FilterRule


def parse_rule_args(tokens: list[str]) -> FilterRule:
    """Build a rule from -p/--dport/-s/-j tokens.

    Raises:
        ValueError: Unknown flag, missing value, or invalid rule
    """
    proto, dport, src, verdict = Proto.ANY, None, None, None
    iterator = iter(tokens)
    for token in iterator:
        try:
            value = next(iterator)
        except StopIteration:
            raise ValueError(f"Flag {token} needs a value") from None
        if token in _PROTO_FLAGS:
            proto = Proto(value.lower() if value.lower() != "all" else "any")
        elif token in _DPORT_FLAGS:
            if not value.isdigit():
                raise ValueError(f"Invalid port: {value}")
            dport = int(value)
        elif token in _SRC_FLAGS:
            src = value
        elif token in _JUMP_FLAGS:
            verdict = Verdict(value.upper())
        else:
            raise ValueError(f"Unknown flag: {token}")
    if verdict is None:
        raise ValueError("Missing -j VERDICT")
    return FilterRule(proto=proto, dport=dport, src=src, verdict=verdict)


def parse_rule_command(line: str) -> RuleCommand:
    """Parse one iptables command line.

    Raises:
        ValueError: If the line is not a supported command
    """
    tokens = shlex.split(line)
    if tokens and tokens[0] == "iptables":
        tokens = tokens[1:]
    if len(tokens) < 2 or tokens[0] not in _OPS:
        raise ValueError(f"Expected -I/-A/-D CHAIN ...: {line!r}")
    return RuleCommand(_OPS[tokens[0]], tokens[1], parse_rule_args(tokens[2:]))


def format_rule(rule: FilterRule) -> str:
    """Rule flags in iptables -S order."""
    parts = []
    if rule.src is not None:
        parts.append(f"-s {rule.src}")
    if rule.proto != Proto.ANY:
        parts.append(f"-p {rule.proto.value}")
    if rule.dport is not None:
        parts.append(f"--dport {rule.dport}")
    parts.append(f"-j {rule.verdict.value}")
    return " ".join(parts)


def dump_chain(chain: Chain) -> str:
    """`iptables -S` style listing: policy line then one -A line per rule."""
    lines = [f"-P {chain.name} {chain.policy.value}"]
    lines.extend(f"-A {chain.name} {format_rule(rule)}" for rule in chain.rules)
    return "\n".join(lines) + "\n"
