"""Dial-plan compilation and execution."""

from .compiler import Dialplan, compile_plan, render_plan
from .interpreter import (
    Action,
    Completion,
    DigitsInput,
    ExecState,
    parse_goto,
    start,
    step,
    substitute,
)

__all__ = [
    "Action",
    "Completion",
    "DigitsInput",
    "Dialplan",
    "ExecState",
    "compile_plan",
    "parse_goto",
    "render_plan",
    "start",
    "step",
    "substitute",
]
