"""Data models for minipbx.

This package contains the dataclasses and enumerations shared by the
domain modules, the runtime and the CLI.
"""

from minipbx.models.acl import (
    GrantStatement,
    GrantTriple,
    ObjectScope,
    Principal,
    RevokeStatement,
    StudentRecord,
)
from minipbx.models.conf import (
    Credential,
    CredentialTable,
    DialplanDoc,
    ExtenLine,
    MailboxEntry,
    OperationCall,
    PeerEntry,
    TunnelConfig,
    ValidationIssue,
    ValidationReport,
)
from minipbx.models.config import Settings
from minipbx.models.enums import (
    CallEvent,
    CallState,
    EventKind,
    NotificationCategory,
    Proto,
    SipMethod,
    Verdict,
)
from minipbx.models.media import DtmfEvent, MediaSession, RtpFrame
from minipbx.models.notification import Notification
from minipbx.models.packet import FilterRule, Packet
from minipbx.models.security import (
    Alert,
    BlacklistEntry,
    RateRule,
    ResponseCommand,
    SecurityEvent,
)
from minipbx.models.sip import CallSession, Registration, SipMessage, SipUri
from minipbx.models.state import PbxState, TunnelLease

__all__ = [
    "Alert",
    "BlacklistEntry",
    "CallEvent",
    "CallSession",
    "CallState",
    "Credential",
    "CredentialTable",
    "DialplanDoc",
    "DtmfEvent",
    "EventKind",
    "ExtenLine",
    "FilterRule",
    "GrantStatement",
    "GrantTriple",
    "MailboxEntry",
    "MediaSession",
    "Notification",
    "NotificationCategory",
    "ObjectScope",
    "OperationCall",
    "Packet",
    "PbxState",
    "PeerEntry",
    "Principal",
    "Proto",
    "RateRule",
    "Registration",
    "ResponseCommand",
    "RevokeStatement",
    "RtpFrame",
    "SecurityEvent",
    "Settings",
    "SipMessage",
    "SipMethod",
    "SipUri",
    "StudentRecord",
    "TunnelConfig",
    "TunnelLease",
    "ValidationIssue",
    "ValidationReport",
    "Verdict",
]
