"""Handler for pbxctl sentinel commands."""

import json

from minipbx.domain.notify import NotificationSink
from minipbx.domain.pktfilter import Chain, PacketFilter
from minipbx.domain.sentinel import ActiveResponder, Blacklist
from minipbx.handlers.base import BaseHandler


class SentinelHandler(BaseHandler):
    """Blacklist inspection, manual unblock and alert log filtering."""

    def status(self, state_path: str | None = None, format: str = "text") -> str:
        state = self.state_manager(state_path).load_state()
        entries = Blacklist(state.blacklist).sorted_entries()
        return self.formatter.format_blacklist(entries, format)

    def unblock(
        self,
        src: str,
        at: float = 0.0,
        state_path: str | None = None,
        settings_path: str | None = None,
        format: str = "text",
    ) -> str:
        """Remove the source's DROP rule and blacklist entry together.

        Raises:
            NotBlacklistedError: If the source is not blacklisted
        """
        settings = self.load_settings(settings_path)
        manager = self.state_manager(state_path)
        state = manager.load_state()
        packet_filter = PacketFilter(Chain(rules=tuple(state.rules), policy=state.policy))
        blacklist = Blacklist(state.blacklist)
        responder = ActiveResponder(packet_filter, blacklist, NotificationSink(), settings.admin_email)

        alert = responder.unblock(src, at)
        state.rules = list(packet_filter.rules)
        state.blacklist = dict(blacklist.entries)
        manager.save_state(state)
        if format == "json":
            return json.dumps(alert.to_dict(), indent=2)
        return alert.log_line()

    def alerts(self, log_path: str, min_level: int = 0, src: str | None = None, format: str = "text") -> str:
        """Filter an alert log written by `pbxctl run --out`.

        Raises:
            FileNotFoundError: If the log does not exist
            ValueError: For a line that is not an alert record
        """
        selected = []
        for number, line in enumerate(self.fs.read_file(log_path).splitlines(), start=1):
            fields = line.split("\t")
            if len(fields) != 5 or not fields[1].isdigit():
                raise ValueError(f"{log_path}:{number}: not an alert record")
            if int(fields[1]) >= min_level and (src is None or fields[2] == src):
                selected.append(line)
        return self.formatter.format_lines("alerts", selected, format)
