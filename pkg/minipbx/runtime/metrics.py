"""Run counters reported at the end of a scenario."""

from dataclasses import dataclass, field

from minipbx.models.enums import NotificationCategory, Verdict


@dataclass
class RunMetrics:
    """Counters of one run. Verdict counters always sum to packets_ingested."""

    packets_ingested: int = 0
    packets_accepted: int = 0
    packets_dropped: int = 0
    packets_rejected: int = 0
    registrations_ok: int = 0
    registrations_failed: int = 0
    calls_completed: int = 0
    calls_no_answer: int = 0
    voicemail_deposits: int = 0
    media_frames: int = 0
    tunnels_established: int = 0
    alerts_by_level: dict[int, int] = field(default_factory=dict)
    blacklist_size: int = 0
    notifications: dict[str, int] = field(
        default_factory=lambda: {category.value: 0 for category in NotificationCategory}
    )
    post_blacklist_deliveries: int = 0

    def count_verdict(self, verdict: Verdict) -> None:
        self.packets_ingested += 1
        if verdict == Verdict.ACCEPT:
            self.packets_accepted += 1
        elif verdict == Verdict.DROP:
            self.packets_dropped += 1
        else:
            self.packets_rejected += 1

    @property
    def conserved(self) -> bool:
        return self.packets_ingested == (
            self.packets_accepted + self.packets_dropped + self.packets_rejected
        )

    def value(self, key: str) -> int:
        """Counter by name; map entries as `alerts_by_level.15` or `notifications.admin-alert`.

        Raises:
            KeyError: Unknown counter
        """
        name, _, entry = key.partition(".")
        if not hasattr(self, name):
            raise KeyError(key)
        value = getattr(self, name)
        if isinstance(value, dict):
            if not entry:
                return sum(value.values())
            lookup = int(entry) if name == "alerts_by_level" else entry
            return value.get(lookup, 0)
        if entry:
            raise KeyError(key)
        return value

    def to_dict(self) -> dict:
        return {
            "packets": {
                "ingested": self.packets_ingested,
                "accepted": self.packets_accepted,
                "dropped": self.packets_dropped,
                "rejected": self.packets_rejected,
            },
            "registrations": {"ok": self.registrations_ok, "failed": self.registrations_failed},
            "calls": {"completed": self.calls_completed, "no_answer": self.calls_no_answer},
            "voicemail_deposits": self.voicemail_deposits,
            "media_frames": self.media_frames,
            "tunnels_established": self.tunnels_established,
            "alerts_by_level": dict(sorted(self.alerts_by_level.items())),
            "blacklist_size": self.blacklist_size,
            "notifications": dict(sorted(self.notifications.items())),
            "post_blacklist_deliveries": self.post_blacklist_deliveries,
        }
