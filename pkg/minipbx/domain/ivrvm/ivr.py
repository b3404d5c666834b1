"""Attendance IVR.

Caller flow: welcome, student id, password, verification against the
attendance store, attendance readout, then "another student?" (1 = yes,
2 = no). A wrong password loops back to the id prompt until the retry cap
is reached.
"""

import logging
from dataclasses import dataclass, replace

from minipbx.constants import (
    PROMPT_ANOTHER_STUDENT,
    PROMPT_ATTENDANCE_IS,
    PROMPT_BAD_PASSWORD,
    PROMPT_ENTER_ID,
    PROMPT_ENTER_PASSWORD,
    PROMPT_GOODBYE,
    PROMPT_SORRY,
    PROMPT_WELCOME,
)
from minipbx.domain.acl import StoreGateway
from minipbx.domain.dialplan import Action, Completion, DigitsInput
from minipbx.exceptions import AccessDeniedError, StoreUnavailableError, StudentNotFoundError
from minipbx.models.acl import Principal
from minipbx.models.enums import ActionKind, AwaitKind, IvrPhase

logger = logging.getLogger(__name__)

DEFAULT_RETRY_CAP = 3

P = IvrPhase

ALLOWED_ARROWS = frozenset(
    {
        (P.WELCOME, P.ASK_ID),
        (P.ASK_ID, P.READ_ID),
        (P.READ_ID, P.ASK_PW),
        (P.ASK_PW, P.READ_PW),
        (P.READ_PW, P.VERIFY),
        (P.VERIFY, P.FETCH),
        (P.VERIFY, P.BAD_PW),
        (P.VERIFY, P.DONE),
        (P.FETCH, P.SPEAK),
        (P.FETCH, P.BAD_PW),
        (P.FETCH, P.DONE),
        (P.SPEAK, P.AGAIN),
        (P.AGAIN, P.AGAIN),
        (P.AGAIN, P.ASK_ID),
        (P.AGAIN, P.DONE),
        (P.BAD_PW, P.ASK_ID),
        (P.BAD_PW, P.DONE),
    }
)

ATTENDANCE_QUERY = "attendance"


@dataclass(frozen=True)
class IvrStart:
    """The call has been handed to the IVR."""


@dataclass(frozen=True)
class IvrSession:
    phase: IvrPhase = IvrPhase.WELCOME
    entered_id: str = ""
    entered_pw: str = ""
    retries: int = 0
    trail: tuple[IvrPhase, ...] = (IvrPhase.WELCOME,)
    src: str = "127.0.0.1"

    @property
    def done(self) -> bool:
        return self.phase is IvrPhase.DONE

    def to(self, phase: IvrPhase, **changes) -> "IvrSession":
        if (self.phase, phase) not in ALLOWED_ARROWS:
            raise ValueError(f"IVR cannot move from {self.phase.value} to {phase.value}")
        return replace(self, phase=phase, trail=self.trail + (phase,), **changes)


def authenticate(
    entered_id: str,
    entered_pw: str,
    gateway: StoreGateway,
    principal: Principal,
    src: str = "127.0.0.1",
    at: float = 0.0,
) -> bool:
    """Exact match of id and password against the store.

    Raises:
        StoreUnavailableError: Store down
        AccessDeniedError: The IVR principal may not read the table
    """
    if not entered_id.isdigit() or not entered_pw.isdigit():
        return False
    return gateway.authenticate(principal, entered_id, entered_pw, src=src, at=at)


def lookup_completion(
    gateway: StoreGateway,
    principal: Principal,
    student_id: str,
    src: str = "127.0.0.1",
    at: float = 0.0,
) -> Completion:
    """Attendance query outcome as an interpreter Completion."""
    try:
        value = gateway.query_attendance(principal, student_id, src=src, at=at)
    except StudentNotFoundError:
        return Completion("not-found")
    except AccessDeniedError:
        return Completion("denied")
    except StoreUnavailableError:
        return Completion("unavailable")
    return Completion("ok", (("ATTENDANCE", str(value)),))


def _read(register: str, prompt: str, timeout: float) -> Action:
    return Action(ActionKind.READ, register, prompt=prompt, timeout=timeout, awaits=AwaitKind.DIGITS)


class AttendanceIvr:
    """Drives IvrSession through the attendance flow."""

    def __init__(
        self,
        gateway: StoreGateway,
        principal: Principal,
        retry_cap: int = DEFAULT_RETRY_CAP,
        read_timeout: float = 5.0,
    ):
        self.gateway = gateway
        self.principal = principal
        self.retry_cap = retry_cap
        self.read_timeout = read_timeout
        if retry_cap != DEFAULT_RETRY_CAP:
            logger.info("IVR retry cap is %d (documented flow uses %d)", retry_cap, DEFAULT_RETRY_CAP)

    def run(
        self,
        session: IvrSession,
        event: IvrStart | DigitsInput | Completion,
        at: float = 0.0,
    ) -> tuple[list[Action], IvrSession]:
        """Feed one event, return the actions it produces and the new session.

        Raises:
            ValueError: If the event does not fit the current phase
        """
        phase = session.phase
        if isinstance(event, IvrStart) and phase is P.WELCOME:
            actions = [Action(ActionKind.PLAY, PROMPT_WELCOME)]
            more, session = self._ask_id(session)
            return actions + more, session
        if isinstance(event, DigitsInput) and phase is P.READ_ID:
            session = session.to(P.ASK_PW, entered_id=event.value)
            session = session.to(P.READ_PW)
            return [_read("PW", PROMPT_ENTER_PASSWORD, self.read_timeout)], session
        if isinstance(event, DigitsInput) and phase is P.READ_PW:
            session = session.to(P.VERIFY, entered_pw=event.value)
            return self._verify(session, at)
        if isinstance(event, Completion) and phase is P.FETCH:
            return self._speak(session, event)
        if isinstance(event, DigitsInput) and phase is P.AGAIN:
            choice = event.value
            if choice == "1":
                return self._ask_id(session)
            if choice == "2" or event.timed_out:
                return self._finish(session, PROMPT_GOODBYE)
            session = session.to(P.AGAIN)
            return [_read("CHOICE", PROMPT_ANOTHER_STUDENT, self.read_timeout)], session
        raise ValueError(f"IVR in phase {phase.value} cannot take {type(event).__name__}")

    def fetch(self, session: IvrSession, at: float = 0.0) -> Completion:
        """Answer the FETCH phase's attendance query."""
        return lookup_completion(self.gateway, self.principal, session.entered_id, session.src, at)

    def _ask_id(self, session: IvrSession) -> tuple[list[Action], IvrSession]:
        session = session.to(P.ASK_ID, entered_id="", entered_pw="")
        session = session.to(P.READ_ID)
        return [_read("ID", PROMPT_ENTER_ID, self.read_timeout)], session

    def _verify(self, session: IvrSession, at: float) -> tuple[list[Action], IvrSession]:
        try:
            ok = authenticate(
                session.entered_id,
                session.entered_pw,
                self.gateway,
                self.principal,
                src=session.src,
                at=at,
            )
        except (StoreUnavailableError, AccessDeniedError) as e:
            logger.warning("attendance store refused the IVR: %s", e)
            return self._finish(session, PROMPT_SORRY)
        if not ok:
            return self._bad_password(session)
        session = session.to(P.FETCH, retries=0)
        query = Action(ActionKind.QUERY, ATTENDANCE_QUERY, awaits=AwaitKind.COMPLETION)
        return [query], session

    def _speak(self, session: IvrSession, completion: Completion) -> tuple[list[Action], IvrSession]:
        if completion.status == "not-found":
            return self._bad_password(session)
        if completion.status != "ok":
            return self._finish(session, PROMPT_SORRY)
        value = dict(completion.bindings).get("ATTENDANCE", "")
        session = session.to(P.SPEAK)
        actions = [
            Action(ActionKind.PLAY, PROMPT_ATTENDANCE_IS),
            Action(ActionKind.SAY_DIGITS, value),
        ]
        session = session.to(P.AGAIN)
        actions.append(_read("CHOICE", PROMPT_ANOTHER_STUDENT, self.read_timeout))
        return actions, session

    def _bad_password(self, session: IvrSession) -> tuple[list[Action], IvrSession]:
        session = session.to(P.BAD_PW, retries=session.retries + 1)
        actions = [Action(ActionKind.PLAY, PROMPT_BAD_PASSWORD)]
        if session.retries >= self.retry_cap:
            logger.info("IVR retry cap %d reached for %s", self.retry_cap, session.src)
            session = session.to(P.DONE)
            return actions + [Action(ActionKind.HANGUP)], session
        more, session = self._ask_id(session)
        return actions + more, session

    def _finish(self, session: IvrSession, prompt: str) -> tuple[list[Action], IvrSession]:
        session = session.to(P.DONE)
        return [Action(ActionKind.PLAY, prompt), Action(ActionKind.HANGUP)], session
