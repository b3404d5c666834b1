"""Unit tests for the virtual clock."""

import pytest

from minipbx.runtime import VirtualClock


class TestVirtualClock:
    """Tests for VirtualClock."""

    def test_timers_fire_in_time_order(self):
        clock = VirtualClock()
        fired = []
        clock.schedule(3.0, lambda: fired.append("c"))
        clock.schedule(1.0, lambda: fired.append("a"))
        clock.schedule(2.0, lambda: fired.append("b"))
        clock.run()
        assert fired == ["a", "b", "c"]
        assert clock.now == 3.0

    def test_ties_fire_in_scheduling_order(self):
        clock = VirtualClock()
        fired = []
        for name in "xyz":
            clock.schedule(1.0, lambda n=name: fired.append(n))
        clock.run()
        assert fired == ["x", "y", "z"]

    def test_run_until_stops_and_advances(self):
        clock = VirtualClock()
        fired = []
        clock.schedule(1.0, lambda: fired.append(1))
        clock.schedule(5.0, lambda: fired.append(5))
        assert clock.run_until(2.0) == 1
        assert clock.now == 2.0
        assert clock.pending() == 1

    def test_past_times_run_now(self):
        clock = VirtualClock(start=10.0)
        timer = clock.schedule(4.0, lambda: None)
        assert timer.at == 10.0

    def test_cancelled_timer_skipped(self):
        clock = VirtualClock()
        fired = []
        timer = clock.call_later(1.0, lambda: fired.append(1))
        timer.cancel()
        assert clock.run() == 0
        assert fired == []

    def test_callbacks_can_schedule(self):
        clock = VirtualClock()
        fired = []

        def tick():
            fired.append(clock.now)
            if len(fired) < 3:
                clock.call_later(0.5, tick)

        clock.schedule(0.0, tick)
        clock.run()
        assert fired == [0.0, 0.5, 1.0]

    def test_runaway_queue_detected(self):
        clock = VirtualClock()

        def forever():
            clock.call_later(1.0, forever)

        clock.schedule(0.0, forever)
        with pytest.raises(RuntimeError, match="did not drain"):
            clock.run(limit=100)
