"""Alert level assignment on the 0-15 scale.

Levels 8-15 are actionable, 0-7 informational. Decision order:

1. events marked ignorable -> 0
2. source window beyond flood_multiplier x threshold -> 15
3. auth failures beyond the threshold -> 10
4. register attempts from a never-seen source -> 8, beyond threshold -> 10
5. otherwise the configured base level of the event kind
"""

from minipbx.models.config import DEFAULT_ALERT_LEVELS
from minipbx.models.enums import EventKind
from minipbx.models.security import Alert, SecurityEvent

IGNORED_RULE = 100000
FLOOD_RULE = 100100
RATE_RULE = 100101
BURST_RULE = 100102
FIRST_SEEN_RULE = 100103
DUPLICATE_BLACKLIST_RULE = 100200
UNBLOCK_RULE = 100201
AUTO_RESPONSE_RULE = 100202

RULE_IDS: dict[EventKind, int] = {
    EventKind.GENERIC: 100001,
    EventKind.REGISTER_SUCCESS: 100002,
    EventKind.CONFIG_ERROR: 100003,
    EventKind.ACCESS_DENIED: 100004,
    EventKind.MALFORMED_PACKET: 100005,
    EventKind.AUTH_FAILURE: 100006,
    EventKind.UNKNOWN_USER: 100007,
    EventKind.PORT_PROBE: 100008,
    EventKind.REGISTER_ATTEMPT: 100009,
    EventKind.INTEGRITY_WARNING: 100010,
}

FLOOD_LEVEL = 15
BURST_LEVEL = 10
FIRST_SEEN_LEVEL = 8


class AlertClassifier:
    """Maps security events to alerts."""

    def __init__(
        self,
        levels: dict[str, int] | None = None,
        threshold: int = 10,
        flood_multiplier: int = 5,
    ):
        self.levels = {**DEFAULT_ALERT_LEVELS, **(levels or {})}
        self.threshold = threshold
        self.flood_multiplier = flood_multiplier

    def base_level(self, kind: EventKind) -> int:
        return self.levels[kind.value]

    def classify(self, event: SecurityEvent, window_count: int = 0, first_seen: bool = False) -> Alert:
        """Classify one event.

        Args:
            event: Event to classify
            window_count: Requests from event.src inside the rate window
            first_seen: No earlier event from this source was classified
        """
        level, rule_id, label = self._decide(event, window_count, first_seen)
        description = f"{label}: {event.detail}" if event.detail else label
        return Alert(level, event.src, event.at, rule_id, description)

    def _decide(self, event: SecurityEvent, count: int, first_seen: bool) -> tuple[int, int, str]:
        kind = event.kind
        if event.ignorable:
            return 0, IGNORED_RULE, "ignored"
        if count > self.flood_multiplier * self.threshold:
            return FLOOD_LEVEL, FLOOD_RULE, f"severe attack ({count} requests in window)"
        if kind == EventKind.AUTH_FAILURE and count > self.threshold:
            return BURST_LEVEL, BURST_RULE, "multiple bad passwords"
        if kind == EventKind.REGISTER_ATTEMPT:
            if first_seen:
                return FIRST_SEEN_LEVEL, FIRST_SEEN_RULE, "first time seen source"
            if count > self.threshold:
                return BURST_LEVEL, BURST_RULE, "register burst"
        return self.base_level(kind), RULE_IDS[kind], kind.value
