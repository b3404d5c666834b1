"""Output formatting for pbxctl.

Every read command supports --format json. Text output is line oriented
and tab separated where other tools are expected to diff it.
"""

import json
from typing import TYPE_CHECKING

from minipbx.domain.pktfilter import Chain, dump_chain, format_rule
from minipbx.models.notification import Notification
from minipbx.models.security import BlacklistEntry
from minipbx.models.state import TunnelLease

if TYPE_CHECKING:
    from minipbx.runtime.metrics import RunMetrics


class OutputFormatter:
    """Format output as text or JSON."""

    def format_chain(self, chain: Chain, format: str) -> str:
        """Format the INPUT chain.

        Args:
            chain: Chain to list, head first
            format: Output format - "text" or "json"
        """
        if format == "json":
            return self._format_chain_json(chain)
        return self._format_chain_text(chain)

    def _format_chain_text(self, chain: Chain) -> str:
        return dump_chain(chain).rstrip("\n")

    def _format_chain_json(self, chain: Chain) -> str:
        return json.dumps(
            {
                "chain": chain.name,
                "policy": chain.policy.value,
                "rules": [
                    {"position": n, "rule": format_rule(rule), **rule.to_dict()}
                    for n, rule in enumerate(chain.rules, start=1)
                ],
            },
            indent=2,
        )

    def format_blacklist(self, entries: list[BlacklistEntry], format: str) -> str:
        if format == "json":
            return json.dumps({"blacklist": [e.to_dict() for e in entries]}, indent=2)
        if not entries:
            return "No blacklisted sources."
        return "\n".join(f"{e.src}\t{e.since:.3f}\t{e.level}\t{e.reason}" for e in entries)

    def format_sessions(self, leases: list[TunnelLease], format: str) -> str:
        """Session table: user, leased address, established-at."""
        if format == "json":
            return json.dumps({"sessions": [lease.to_dict() for lease in leases]}, indent=2)
        if not leases:
            return "No tunnel sessions."
        return "\n".join(
            f"{lease.user}\t{lease.address}\t{lease.established_at:.3f}"
            for lease in sorted(leases, key=lambda l: l.user)
        )

    def format_check(self, principal: str, privilege: str, obj: str, allowed: bool, format: str) -> str:
        if format == "json":
            return json.dumps(
                {"principal": principal, "privilege": privilege, "object": obj, "allowed": allowed},
                indent=2,
            )
        verdict = "allowed" if allowed else "denied"
        return f"{principal} {privilege} on {obj}: {verdict}"

    def format_mail(self, notifications: list[Notification], format: str) -> str:
        if format == "json":
            return json.dumps({"mail": [n.to_dict() for n in notifications]}, indent=2)
        if not notifications:
            return "No mail."
        return "\n".join(
            f"{n.receipt}\t{n.at:.3f}\t{n.category.value}\t{n.to}\t{n.subject}" for n in notifications
        )

    def format_lines(self, key: str, lines: list[str], format: str) -> str:
        """Pre-rendered lines, e.g. a plan dump or an alert log."""
        if format == "json":
            return json.dumps({key: lines}, indent=2)
        return "\n".join(lines)

    def format_run(self, name: str, metrics: "RunMetrics", failure: str | None, format: str) -> str:
        """Format the final report of a scenario run.

        Args:
            name: Scenario name
            metrics: Final counters
            failure: First assertion failure, None when every assertion held
            format: Output format - "text" or "json"
        """
        if format == "json":
            return self._format_run_json(name, metrics, failure)
        return self._format_run_text(name, metrics, failure)

    def _format_run_text(self, name: str, metrics: "RunMetrics", failure: str | None) -> str:
        data = metrics.to_dict()
        lines = [f"scenario {name}: {'FAIL' if failure else 'ok'}"]
        packets = data["packets"]
        lines.append(
            "  packets: {ingested} ingested, {accepted} accepted, {dropped} dropped, "
            "{rejected} rejected".format(**packets)
        )
        lines.append(
            f"  registrations: {metrics.registrations_ok} ok, {metrics.registrations_failed} failed"
        )
        lines.append(f"  calls: {metrics.calls_completed} completed, {metrics.calls_no_answer} no answer")
        lines.append(f"  voicemail deposits: {metrics.voicemail_deposits}")
        lines.append(f"  media frames: {metrics.media_frames}")
        lines.append(f"  tunnels: {metrics.tunnels_established}")
        if metrics.alerts_by_level:
            levels = ", ".join(f"{lvl}:{count}" for lvl, count in sorted(metrics.alerts_by_level.items()))
            lines.append(f"  alerts by level: {levels}")
        lines.append(f"  blacklist: {metrics.blacklist_size}")
        mail = ", ".join(f"{cat} {count}" for cat, count in sorted(metrics.notifications.items()))
        lines.append(f"  notifications: {mail}")
        if failure:
            lines.append(f"  {failure}")
        return "\n".join(lines)

    def _format_run_json(self, name: str, metrics: "RunMetrics", failure: str | None) -> str:
        return json.dumps(
            {"scenario": name, "ok": failure is None, "failure": failure, "metrics": metrics.to_dict()},
            indent=2,
        )
