"""Handler for pbxctl fw commands: the persisted INPUT chain."""

import logging

from minipbx.domain.pktfilter import Chain, PacketFilter, format_rule, parse_rule_args
from minipbx.domain.sentinel import is_blacklist_rule_for
from minipbx.exceptions import UnknownRuleError
from minipbx.handlers.base import BaseHandler
from minipbx.models.state import PbxState

logger = logging.getLogger(__name__)


class FwHandler(BaseHandler):
    """List and mutate the INPUT chain of the admin state.

    Rule flags follow iptables: -p PROTO, --dport N, -s SRC, -j VERDICT.
    """

    def list_rules(self, state_path: str | None = None, format: str = "text") -> str:
        state = self.state_manager(state_path).load_state()
        return self.formatter.format_chain(_chain_of(state), format)

    def insert(self, tokens: list[str], state_path: str | None = None) -> str:
        return self._mutate(tokens, state_path, head=True)

    def append(self, tokens: list[str], state_path: str | None = None) -> str:
        return self._mutate(tokens, state_path, head=False)

    def _mutate(self, tokens: list[str], state_path: str | None, head: bool) -> str:
        """
        Raises:
            ValueError: Malformed rule flags
        """
        rule = parse_rule_args(tokens)
        manager = self.state_manager(state_path)
        state = manager.load_state()
        packet_filter = PacketFilter(_chain_of(state))
        if head:
            packet_filter.insert(rule)
        else:
            packet_filter.append(rule)
        state.rules = list(packet_filter.rules)
        manager.save_state(state)
        verb = "Inserted" if head else "Appended"
        return f"{verb} -A INPUT {format_rule(rule)}"

    def delete(self, tokens: list[str], state_path: str | None = None) -> str:
        """Delete every rule equal to the given one.

        A blacklist DROP for a blacklisted source goes through unblock so
        the blacklist and the chain stay in step.

        Raises:
            ValueError: Malformed rule flags
            UnknownRuleError: No such rule in the chain
        """
        rule = parse_rule_args(tokens)
        manager = self.state_manager(state_path)
        state = manager.load_state()
        packet_filter = PacketFilter(_chain_of(state))

        blocked = str(rule.network.network_address) if rule.is_blacklist_drop else None
        if blocked in state.blacklist:
            packet_filter.delete_matching(is_blacklist_rule_for(blocked))
            del state.blacklist[blocked]
            logger.info("Unblocked %s via rule delete", blocked)
            removed = 1
        else:
            removed = packet_filter.delete_rule(rule)
        if not removed:
            raise UnknownRuleError(f"No rule -A INPUT {format_rule(rule)}")
        state.rules = list(packet_filter.rules)
        manager.save_state(state)
        return f"Deleted -A INPUT {format_rule(rule)}"


def _chain_of(state: PbxState) -> Chain:
    return Chain(rules=tuple(state.rules), policy=state.policy)
