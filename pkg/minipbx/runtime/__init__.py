"""Virtual-clock runtime: pipeline, switchboard, phones and scenarios."""

from minipbx.runtime.bootstrap import Pbx, build_pbx, fresh_state
from minipbx.runtime.clock import Timer, VirtualClock
from minipbx.runtime.metrics import RunMetrics
from minipbx.runtime.scenario import (
    RunResult,
    Scenario,
    ScenarioRunner,
    load_scenario,
    parse_scenario,
    run_scenario,
    write_artifacts,
)

__all__ = [
    "Pbx",
    "RunMetrics",
    "RunResult",
    "Scenario",
    "ScenarioRunner",
    "Timer",
    "VirtualClock",
    "build_pbx",
    "fresh_state",
    "load_scenario",
    "parse_scenario",
    "run_scenario",
    "write_artifacts",
]
