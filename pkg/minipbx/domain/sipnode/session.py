"""Call-session state machine."""

from dataclasses import replace

from minipbx.exceptions import SipProtocolError
from minipbx.models.enums import CallEvent, CallState
from minipbx.models.sip import CallSession

# Every (state, event) pair not listed here is illegal.
TRANSITIONS: dict[tuple[CallState, CallEvent], CallState] = {
    (CallState.INVITING, CallEvent.INVITE): CallState.INVITING,
    (CallState.INVITING, CallEvent.RING): CallState.RINGING,
    (CallState.INVITING, CallEvent.TIMEOUT): CallState.NO_ANSWER,
    (CallState.RINGING, CallEvent.ANSWER): CallState.ACTIVE,
    (CallState.RINGING, CallEvent.TIMEOUT): CallState.NO_ANSWER,
    (CallState.ACTIVE, CallEvent.BYE): CallState.TERMINATED,
}


def session_event(session: CallSession, event: CallEvent) -> CallSession:
    """Apply one event.

    Raises:
        SipProtocolError: If the event is illegal in the session's state
    """
    target = TRANSITIONS.get((session.state, event))
    if target is None:
        raise SipProtocolError(session.state.value, event.value)
    return replace(session, state=target, history=session.history + (session.state,))


def can_apply(session: CallSession, event: CallEvent) -> bool:
    return (session.state, event) in TRANSITIONS
