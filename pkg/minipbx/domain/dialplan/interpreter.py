"""Stepwise dial-plan interpreter.

`step` is a pure transition: given the plan, an execution state and the
input the state is waiting for, it returns the next Action and the new
state. Read, Dial, MYSQL and VoiceMailMain suspend the state until the
runtime feeds back digits or a completion.
"""

import logging
import math
import re
from dataclasses import dataclass, field, replace

from minipbx.constants import DEFAULT_STEP_BUDGET, READ_TERMINATOR
from minipbx.exceptions import DialplanRuntimeError
from minipbx.models.enums import ActionKind, AwaitKind

from .compiler import Dialplan

logger = logging.getLogger(__name__)

_VARIABLE_RE = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class Action:
    """One thing the call runtime must do.

    Attributes:
        kind: Action kind
        arg: File token, register, target, dial string, template,
            digits or mailbox reference depending on kind
        prompt: Prompt token played before a Read
        timeout: Read inter-digit or Dial ring timeout
        awaits: What the interpreter needs back before continuing
    """

    kind: ActionKind
    arg: str = ""
    prompt: str = ""
    timeout: float | None = None
    awaits: AwaitKind | None = None

    @property
    def dial_peer(self) -> str:
        """Peer name of a "SIP/peer" dial string."""
        technology, sep, peer = self.arg.partition("/")
        return peer if sep else technology

    def __str__(self) -> str:
        return f"{self.kind.value}({self.arg})"


@dataclass(frozen=True)
class DigitsInput:
    """Buffered DTMF for a pending Read; digits after the terminator are ignored."""

    digits: str = ""
    timed_out: bool = False

    @property
    def value(self) -> str:
        return self.digits.partition(READ_TERMINATOR)[0]


@dataclass(frozen=True)
class Completion:
    """Outcome of a Dial, query or voicemail action."""

    status: str = "ok"
    bindings: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ExecState:
    context: str
    exten: str
    priority: int | None
    variables: dict[str, str] = field(default_factory=dict, compare=False)
    steps: int = 0
    budget: int = DEFAULT_STEP_BUDGET
    read_timeout: float = 5.0
    dial_timeout: float = 20.0
    awaiting: AwaitKind | None = None
    pending_register: str | None = None
    finished: bool = False
    session: str | None = None

    def variable(self, name: str) -> str:
        return self.variables.get(name, "")

    def with_variables(self, **bindings: str) -> "ExecState":
        return replace(self, variables={**self.variables, **bindings})


def start(
    plan: Dialplan,
    context: str,
    exten: str,
    *,
    budget: int = DEFAULT_STEP_BUDGET,
    read_timeout: float = 5.0,
    dial_timeout: float = 20.0,
    session: str | None = None,
    variables: dict[str, str] | None = None,
) -> ExecState:
    """Initial state at the lowest priority of (context, exten).

    Raises:
        DialplanRuntimeError: If the extension does not exist
    """
    priority = plan.first_priority(context, exten)
    if priority is None:
        raise DialplanRuntimeError(f"No extension {exten} in context [{context}]")
    return ExecState(
        context=context,
        exten=exten,
        priority=priority,
        variables=dict(variables or {}),
        budget=budget,
        read_timeout=read_timeout,
        dial_timeout=dial_timeout,
        session=session,
    )


def substitute(text: str, variables: dict[str, str]) -> str:
    """Expand ${VAR}; unknown variables expand to the empty string."""
    return _VARIABLE_RE.sub(lambda m: variables.get(m.group(1), ""), text)


def parse_goto(args: str, context: str, exten: str) -> tuple[str, str, int]:
    """Resolve "p", "e,p" or "c,e,p" relative to the current position.

    Raises:
        DialplanRuntimeError: For a target that is not one of those forms
    """
    parts = [part.strip() for part in args.split(",")]
    if len(parts) == 1:
        target = (context, exten, parts[0])
    elif len(parts) == 2:
        target = (context, parts[0], parts[1])
    elif len(parts) == 3:
        target = (parts[0], parts[1], parts[2])
    else:
        raise DialplanRuntimeError(f"Malformed Goto target: {args!r}")
    try:
        return target[0], target[1], int(target[2])
    except ValueError:
        raise DialplanRuntimeError(f"Goto priority must be an integer: {args!r}") from None


def step(
    plan: Dialplan,
    state: ExecState,
    input: DigitsInput | Completion | None = None,
) -> tuple[Action, ExecState]:
    """Run until the next Action.

    Raises:
        DialplanRuntimeError: If a suspended state is stepped without the
            input it waits for
    """
    if state.finished:
        return Action(ActionKind.HANGUP), state

    state = _resume(state, input)

    while True:
        if state.steps >= state.budget:
            logger.warning(
                "step budget %d exhausted in [%s] %s, hanging up",
                state.budget,
                state.context,
                state.exten,
            )
            return _hangup(state)

        if state.priority is None:
            return _hangup(state)

        op = plan.operation(state.context, state.exten, state.priority)
        if op is None:
            logger.warning("priority %s vanished in [%s] %s", state.priority, state.context, state.exten)
            return _hangup(state)

        state = replace(state, steps=state.steps + 1)
        following = plan.next_priority(state.context, state.exten, state.priority)
        advanced = replace(state, priority=following)
        name = op.name.lower()
        args = op.arg_list()

        if name == "playback":
            return Action(ActionKind.PLAY, substitute(op.args.strip(), state.variables)), advanced

        if name == "hangup":
            return _hangup(state)

        if name == "read":
            register = args[0] if args else "DIGITS"
            prompt = substitute(args[1], state.variables) if len(args) > 1 else ""
            action = Action(
                ActionKind.READ,
                register,
                prompt=prompt,
                timeout=state.read_timeout,
                awaits=AwaitKind.DIGITS,
            )
            return action, replace(advanced, awaiting=AwaitKind.DIGITS, pending_register=register)

        if name == "goto":
            try:
                context, exten, priority = parse_goto(op.args, state.context, state.exten)
            except DialplanRuntimeError as e:
                logger.warning("%s, hanging up", e)
                return _hangup(state)
            if not plan.has(context, exten, priority):
                logger.warning("Goto target %s,%s,%d does not exist, hanging up", context, exten, priority)
                return _hangup(state)
            target = f"{context},{exten},{priority}"
            return Action(ActionKind.GOTO, target), replace(
                state, context=context, exten=exten, priority=priority
            )

        if name == "dial":
            dial_string = substitute(args[0], state.variables) if args else ""
            raw_timeout = substitute(args[1], state.variables).strip() if len(args) > 1 else ""
            timeout = _dial_timeout(raw_timeout, state.dial_timeout)
            action = Action(ActionKind.DIAL, dial_string, timeout=timeout, awaits=AwaitKind.COMPLETION)
            return action, replace(advanced, awaiting=AwaitKind.COMPLETION)

        if name == "mysql":
            action = Action(ActionKind.QUERY, op.args.strip(), awaits=AwaitKind.COMPLETION)
            return action, replace(advanced, awaiting=AwaitKind.COMPLETION)

        if name == "saydigits":
            digits = substitute(op.args.strip(), state.variables)
            return Action(ActionKind.SAY_DIGITS, digits), advanced

        if name == "voicemailmain":
            action = Action(ActionKind.VOICEMAIL, op.args.strip(), awaits=AwaitKind.COMPLETION)
            return action, replace(advanced, awaiting=AwaitKind.COMPLETION)

        logger.debug("skipping unsupported operation %s", op)
        state = advanced


def _resume(state: ExecState, input: DigitsInput | Completion | None) -> ExecState:
    if state.awaiting is None:
        return state
    if state.awaiting is AwaitKind.DIGITS:
        if not isinstance(input, DigitsInput):
            raise DialplanRuntimeError("Interpreter is waiting for digits")
        register = state.pending_register or "DIGITS"
        resumed = state.with_variables(**{register: input.value})
    else:
        if not isinstance(input, Completion):
            raise DialplanRuntimeError("Interpreter is waiting for a completion")
        resumed = state.with_variables(STATUS=input.status, **dict(input.bindings))
    return replace(resumed, awaiting=None, pending_register=None)


def _dial_timeout(raw: str, default: float) -> float:
    """Dial's ring timeout in seconds; an empty or unusable value falls back to the default."""
    if not raw:
        return default
    try:
        timeout = float(raw)
    except ValueError:
        logger.warning("Dial timeout %r is not a number, using %.1fs", raw, default)
        return default
    if not math.isfinite(timeout) or timeout <= 0:
        logger.warning("Dial timeout %r must be positive, using %.1fs", raw, default)
        return default
    return timeout


def _hangup(state: ExecState) -> tuple[Action, ExecState]:
    return Action(ActionKind.HANGUP), replace(state, finished=True, awaiting=None)
