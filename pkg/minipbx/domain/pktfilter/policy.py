"""The deployment firewall policy.

The commands are applied top to bottom with insert-at-head semantics, so
the last command ends up first in the chain. With append semantics the
blanket tcp DROP would shadow every tcp accept.
"""

from minipbx.constants import MYSQL_PORT, POP_PORT, PPTP_PORT, SIP_PORT, SMTP_PORT, SSH_PORT
from minipbx.models.enums import ChainOp, Verdict

from .chain import Chain, mutate
from .iptables import parse_rule_command

POLICY_COMMANDS: tuple[tuple[str, str], ...] = (
    ("TCP", "iptables -I INPUT -p tcp -j DROP"),
    ("SSH", "iptables -I INPUT -p tcp -dport 22 -j ACCEPT"),
    ("ICMP", "iptables -I INPUT -p icmp -j ACCEPT"),
    ("UDP", "iptables -I INPUT -p udp -j DROP"),
    ("SIP", "iptables -I INPUT -p udp --dport 5060 -j ACCEPT"),
    ("MySQL", "iptables -I INPUT -p udp --dport 3306 -j ACCEPT"),
    ("PPTP", "iptables -I INPUT -p tcp --dport 1723 -j ACCEPT"),
    ("PPTP", "iptables -I INPUT -p udp --dport 1723 -j ACCEPT"),
    ("SMTP", "iptables -I INPUT -p tcp --dport 25 -j ACCEPT"),
    ("SMTP", "iptables -I INPUT -p udp --dport 25 -j ACCEPT"),
    ("POP", "iptables -I INPUT -p tcp --dport 110 -j ACCEPT"),
    ("POP", "iptables -I INPUT -p udp --dport 110 -j ACCEPT"),
)

ADMITTED_TCP_PORTS = frozenset({SSH_PORT, SMTP_PORT, POP_PORT, PPTP_PORT})
ADMITTED_UDP_PORTS = frozenset({SMTP_PORT, POP_PORT, PPTP_PORT, SIP_PORT, MYSQL_PORT})


def apply_commands(chain: Chain, commands: list[str]) -> Chain:
    for line in commands:
        command = parse_rule_command(line)
        chain = mutate(chain, command.op, command.rule, predicate=lambda r, rule=command.rule: r == rule)
    return chain


def default_chain(policy: Verdict = Verdict.ACCEPT) -> Chain:
    """INPUT chain after running every policy command in listed order."""
    return apply_commands(Chain(policy=policy), [command for _, command in POLICY_COMMANDS])
