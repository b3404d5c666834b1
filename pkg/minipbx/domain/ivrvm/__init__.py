"""Attendance IVR and voicemail."""

from .ivr import (
    ALLOWED_ARROWS,
    ATTENDANCE_QUERY,
    AttendanceIvr,
    IvrSession,
    IvrStart,
    authenticate,
    lookup_completion,
)
from .voicemail import (
    MailboxStore,
    MenuSession,
    VoicemailMenu,
    VoicemailMessage,
    VoiceMailbox,
    deposit_voicemail,
    retrieve_voicemail,
)

__all__ = [
    "ALLOWED_ARROWS",
    "ATTENDANCE_QUERY",
    "AttendanceIvr",
    "IvrSession",
    "IvrStart",
    "MailboxStore",
    "MenuSession",
    "VoiceMailbox",
    "VoicemailMenu",
    "VoicemailMessage",
    "authenticate",
    "deposit_voicemail",
    "lookup_completion",
    "retrieve_voicemail",
]
