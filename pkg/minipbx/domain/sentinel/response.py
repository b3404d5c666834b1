"""Active response: blacklisting through the packet filter.

Coherence: a source has a blacklist entry exactly when the INPUT chain
holds a DROP rule bound to that source alone.
"""

import logging

from minipbx.domain.notify.sink import NotificationSink
from minipbx.domain.pktfilter.chain import PacketFilter, source_is
from minipbx.exceptions import NotBlacklistedError
from minipbx.models.enums import NotificationCategory, Proto, Verdict
from minipbx.models.notification import Notification
from minipbx.models.packet import FilterRule
from minipbx.models.security import Alert, BlacklistEntry, ResponseCommand

from .classifier import DUPLICATE_BLACKLIST_RULE, UNBLOCK_RULE

logger = logging.getLogger(__name__)


class Blacklist:
    """Blocked sources keyed by address."""

    def __init__(self, entries: dict[str, BlacklistEntry] | None = None):
        self.entries: dict[str, BlacklistEntry] = dict(entries or {})

    def __contains__(self, src: str) -> bool:
        return src in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, entry: BlacklistEntry) -> None:
        self.entries[entry.src] = entry

    def remove(self, src: str) -> BlacklistEntry:
        return self.entries.pop(src)

    def sorted_entries(self) -> list[BlacklistEntry]:
        return [self.entries[src] for src in sorted(self.entries)]


def drop_rule(src: str) -> FilterRule:
    return FilterRule(proto=Proto.ANY, src=src, verdict=Verdict.DROP)


def is_blacklist_rule_for(src: str):
    selects_src = source_is(src)
    return lambda rule: rule.is_blacklist_drop and selects_src(rule)


class ActiveResponder:
    """Sole writer of the blacklist and of blacklist rules."""

    def __init__(
        self,
        packet_filter: PacketFilter,
        blacklist: Blacklist,
        notifier: NotificationSink,
        admin_email: str,
    ):
        self.packet_filter = packet_filter
        self.blacklist = blacklist
        self.notifier = notifier
        self.admin_email = admin_email

    def execute(self, command: ResponseCommand) -> Alert | None:
        """Blacklist the command's source.

        Returns:
            A level-1 informational alert when the source was already
            blacklisted, otherwise None
        """
        if command.src in self.blacklist:
            return Alert(
                1, command.src, command.at, DUPLICATE_BLACKLIST_RULE, f"{command.src} already blacklisted"
            )

        self.packet_filter.insert(drop_rule(command.src))
        self.blacklist.add(BlacklistEntry(command.src, command.at, command.reason, command.level))
        self.notifier.send(
            Notification(
                to=self.admin_email,
                subject=f"[minipbx] blacklisted {command.src} (level {command.level})",
                body=(
                    f"Source: {command.src}\n"
                    f"Level: {command.level}\n"
                    f"Rule: {command.rule_id}\n"
                    f"Reason: {command.reason}\n"
                ),
                at=command.at,
                category=NotificationCategory.ADMIN_ALERT,
            )
        )
        logger.info("Blacklisted %s: %s", command.src, command.reason)
        return None

    def unblock(self, src: str, at: float) -> Alert:
        """Remove a source's DROP rule and blacklist entry.

        Raises:
            NotBlacklistedError: If the source is not blacklisted
        """
        if src not in self.blacklist:
            raise NotBlacklistedError(f"{src} is not blacklisted")
        self.packet_filter.delete_matching(is_blacklist_rule_for(src))
        self.blacklist.remove(src)
        logger.info("Unblocked %s", src)
        return Alert(2, src, at, UNBLOCK_RULE, f"{src} unblocked by administrator")

    def is_coherent(self) -> bool:
        blocked = {
            str(rule.network.network_address)
            for rule in self.packet_filter.rules
            if rule.is_blacklist_drop
        }
        return blocked == set(self.blacklist.entries)
