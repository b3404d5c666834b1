"""Per-source sliding-window rate detector."""

from collections import deque

from minipbx.models.security import RateRule, ResponseCommand, SecurityEvent

from .classifier import BURST_LEVEL, FLOOD_LEVEL, FLOOD_RULE, RATE_RULE


class RateDetector:
    """Counts each source's events inside (t - window, t].

    A source breaching the threshold yields one ResponseCommand per
    episode; an episode ends when the source's window is empty. Empty
    windows are forgotten, and idle sources are swept once per window
    length of virtual time.
    """

    def __init__(self, rule: RateRule | None = None, flood_multiplier: int = 5):
        self.rule = rule or RateRule()
        self.flood_multiplier = flood_multiplier
        self._windows: dict[str, deque[float]] = {}
        self._armed: dict[str, bool] = {}
        self._last_at: float | None = None
        self._next_sweep: float | None = None

    def _purge(self, src: str, at: float) -> deque[float] | None:
        window = self._windows.get(src)
        if window is None:
            return None
        horizon = at - self.rule.window
        while window and window[0] <= horizon:
            window.popleft()
        if not window:
            del self._windows[src]
            self._armed.pop(src, None)
            return None
        return window

    def _sweep(self, at: float) -> None:
        if self._next_sweep is not None and at < self._next_sweep:
            return
        for src in list(self._windows):
            self._purge(src, at)
        self._next_sweep = at + self.rule.window

    def observe(self, event: SecurityEvent) -> ResponseCommand | None:
        """Record an event; return a blacklist command on a fresh breach.

        Raises:
            ValueError: If events arrive out of time order
        """
        if self._last_at is not None and event.at < self._last_at:
            raise ValueError(f"Event at {event.at} precedes {self._last_at}")
        self._last_at = event.at
        self._sweep(event.at)

        window = self._purge(event.src, event.at)
        if window is None:
            window = self._windows[event.src] = deque()
            self._armed[event.src] = True
        window.append(event.at)

        count = len(window)
        if count <= self.rule.threshold or not self._armed[event.src]:
            return None
        self._armed[event.src] = False
        if count > self.flood_multiplier * self.rule.threshold:
            level, rule_id = FLOOD_LEVEL, FLOOD_RULE
        else:
            level, rule_id = BURST_LEVEL, RATE_RULE
        return ResponseCommand(
            src=event.src,
            at=event.at,
            level=level,
            rule_id=rule_id,
            reason=f"{count} requests within {self.rule.window:g}s",
        )

    def count(self, src: str, at: float) -> int:
        """Events of src inside the window ending at `at`."""
        window = self._purge(src, at)
        return 0 if window is None else len(window)

    @property
    def tracked_sources(self) -> int:
        return len(self._windows)
