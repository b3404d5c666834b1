"""Virtual clock with a deterministic timer queue."""

import heapq
import itertools
from collections.abc import Callable
from dataclasses import dataclass, field


@dataclass(order=True)
class Timer:
    at: float
    seq: int
    callback: Callable[[], None] = field(compare=False)
    cancelled: bool = field(default=False, compare=False)

    def cancel(self) -> None:
        self.cancelled = True


class VirtualClock:
    """Time only moves when timers fire. Ties fire in scheduling order."""

    def __init__(self, start: float = 0.0):
        self.now = start
        self._queue: list[Timer] = []
        self._seq = itertools.count()

    def schedule(self, at: float, callback: Callable[[], None]) -> Timer:
        """Run callback at `at`; times in the past run at the current time."""
        timer = Timer(max(at, self.now), next(self._seq), callback)
        heapq.heappush(self._queue, timer)
        return timer

    def call_later(self, delay: float, callback: Callable[[], None]) -> Timer:
        return self.schedule(self.now + delay, callback)

    def pending(self) -> int:
        return sum(1 for timer in self._queue if not timer.cancelled)

    def next_at(self) -> float | None:
        while self._queue and self._queue[0].cancelled:
            heapq.heappop(self._queue)
        return self._queue[0].at if self._queue else None

    def run_until(self, until: float) -> int:
        """Fire every timer due at or before `until`, then set now to `until`."""
        fired = 0
        while True:
            at = self.next_at()
            if at is None or at > until:
                break
            timer = heapq.heappop(self._queue)
            self.now = timer.at
            timer.callback()
            fired += 1
        self.now = max(self.now, until)
        return fired

    def run(self, limit: int = 1_000_000) -> int:
        """Drain the queue.

        Raises:
            RuntimeError: If more than `limit` timers fire
        """
        fired = 0
        while (at := self.next_at()) is not None:
            timer = heapq.heappop(self._queue)
            self.now = at
            timer.callback()
            fired += 1
            if fired > limit:
                raise RuntimeError(f"Timer queue did not drain after {limit} timers")
        return fired
