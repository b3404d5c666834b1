"""Enumerations for minipbx data models.

This module defines the enumerations shared across modules:
- PeerType: sip.conf peer roles
- SipMethod / CallState / CallEvent: signaling vocabulary
- Proto / Verdict: packet filter vocabulary
- EventKind: security event vocabulary consumed by the sentinel
- NotificationCategory: what the mail sink records
- IssueSeverity: validation findings
- ActionKind / AwaitKind / IvrPhase: dial-plan and IVR execution
"""

from enum import Enum


class PeerType(Enum):
    """sip.conf peer type."""

    FRIEND = "friend"
    PEER = "peer"
    USER = "user"


class SipMethod(Enum):
    """SIP request methods understood by the codec."""

    REGISTER = "REGISTER"
    INVITE = "INVITE"
    ACK = "ACK"
    BYE = "BYE"
    CANCEL = "CANCEL"
    OPTIONS = "OPTIONS"
    SUBSCRIBE = "SUBSCRIBE"
    NOTIFY = "NOTIFY"


class CallState(Enum):
    """Call session state.

    TERMINATED and NO_ANSWER are absorbing.
    """

    INVITING = "inviting"
    RINGING = "ringing"
    ACTIVE = "active"
    TERMINATED = "terminated"
    NO_ANSWER = "no-answer"

    @property
    def is_final(self) -> bool:
        return self in (CallState.TERMINATED, CallState.NO_ANSWER)


class CallEvent(Enum):
    """Events driving a call session."""

    INVITE = "invite"
    RING = "ring"
    ANSWER = "answer"
    BYE = "bye"
    TIMEOUT = "timeout"


class Proto(Enum):
    """Packet protocol. ANY only appears in filter rules."""

    TCP = "tcp"
    UDP = "udp"
    ICMP = "icmp"
    ANY = "any"

    @property
    def has_ports(self) -> bool:
        return self in (Proto.TCP, Proto.UDP)


class Verdict(Enum):
    """Packet filter verdict."""

    ACCEPT = "ACCEPT"
    DROP = "DROP"
    REJECT = "REJECT"


class EventKind(Enum):
    """Security event kinds ingested by the sentinel."""

    AUTH_FAILURE = "auth-failure"
    UNKNOWN_USER = "unknown-user"
    REGISTER_ATTEMPT = "register-attempt"
    REGISTER_SUCCESS = "register-success"
    PORT_PROBE = "port-probe"
    CONFIG_ERROR = "config-error"
    INTEGRITY_WARNING = "integrity-warning"
    ACCESS_DENIED = "access-denied"
    MALFORMED_PACKET = "malformed-packet"
    GENERIC = "generic"


class NotificationCategory(Enum):
    """Kinds of mail the notify sink carries."""

    ADMIN_ALERT = "admin-alert"
    VOICEMAIL_NOTICE = "voicemail-notice"


class IssueSeverity(Enum):
    """Severity levels for validation issues."""

    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class ActionKind(Enum):
    """What one dial-plan interpreter step asks the call runtime to do."""

    PLAY = "play"
    HANGUP = "hangup"
    READ = "read"
    GOTO = "goto"
    DIAL = "dial"
    QUERY = "query"
    SAY_DIGITS = "say-digits"
    VOICEMAIL = "voicemail"


class AwaitKind(Enum):
    """What a suspended interpreter waits for before it can continue."""

    DIGITS = "digits"
    COMPLETION = "completion"


class IvrPhase(Enum):
    """Attendance IVR phases."""

    WELCOME = "welcome"
    ASK_ID = "ask-id"
    READ_ID = "read-id"
    ASK_PW = "ask-pw"
    READ_PW = "read-pw"
    VERIFY = "verify"
    FETCH = "fetch"
    SPEAK = "speak"
    AGAIN = "again?"
    BAD_PW = "bad-pw"
    DONE = "done"


class ChainOp(Enum):
    """Packet filter chain mutations."""

    INSERT_HEAD = "insert-head"
    APPEND = "append"
    DELETE_MATCHING = "delete-matching"


class ResponsePolicy(Enum):
    """When the sentinel blacklists a source.

    RATE: only on a rate-threshold breach. AUTO: additionally on any
    actionable alert.
    """

    RATE = "rate"
    AUTO = "auto"


class PrivilegeKind(Enum):
    """Partition of database privileges."""

    ACCESS = "access"
    ADMINISTRATIVE = "administrative"


class ServiceState(Enum):
    """Lifecycle of a managed service."""

    STOPPED = "stopped"
    RUNNING = "running"
