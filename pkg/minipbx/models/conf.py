"""Typed documents produced by the configuration parsers.

One dataclass per dialect: sip.conf peers, extensions.conf dial plans,
voicemail.conf mailboxes, pptpd.conf tunnel settings and chap-secrets
credentials, plus the validation report shared by all of them.
"""

import ipaddress
from dataclasses import dataclass, field

from .enums import IssueSeverity, PeerType

# Operations the dial-plan interpreter executes. Anything else loads but is
# reported by the validator.
KNOWN_OPERATIONS = (
    "Playback",
    "Hangup",
    "Read",
    "Goto",
    "Dial",
    "MYSQL",
    "SayDigits",
    "VoiceMailMain",
)

# voicemail.conf has no quoting, so these never appear inside a field
MAILBOX_FIELD_DELIMITERS = (",", ";", "\n", "\r")


def split_mailbox_ref(ref: str) -> tuple[str, str]:
    """Split "756@vmail" into ("756", "vmail").

    Raises:
        ValueError: If the reference is not number@context
    """
    box, sep, context = ref.partition("@")
    if not sep or not box.isdigit() or not context:
        raise ValueError(f"Invalid mailbox reference: {ref!r}")
    return box, context


@dataclass(frozen=True)
class PeerEntry:
    """One sip.conf section.

    Attributes:
        name: Section name, which is also the SIP user the peer registers as
        type: friend, peer or user
        username: Authentication user name (defaults to the section name)
        host: "dynamic" or a fixed address
        secret: Digit-only shared secret (empty when the peer has none)
        context: Dial-plan context the peer's calls start in
        mailbox: Optional "number@context" voicemail reference
        extras: Keys the engine does not interpret, in file order
    """

    name: str
    type: PeerType = PeerType.FRIEND
    username: str = ""
    host: str = "dynamic"
    secret: str = ""
    dtmfmode: str = "rfc2833"
    insecure: str = ""
    canreinvite: str = "no"
    nat: str = "no"
    qualify: str = "no"
    mailbox: str | None = None
    context: str = "default"
    extras: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValueError("Peer name cannot be empty")
        if self.secret and not self.secret.isdigit():
            raise ValueError(f"Peer {self.name}: secret must be decimal digits")
        if self.mailbox is not None:
            split_mailbox_ref(self.mailbox)

    @property
    def auth_user(self) -> str:
        return self.username or self.name


@dataclass(frozen=True)
class OperationCall:
    """Operation name plus its raw argument string."""

    name: str
    args: str = ""

    @property
    def is_known(self) -> bool:
        return self.name.lower() in {op.lower() for op in KNOWN_OPERATIONS}

    def arg_list(self) -> list[str]:
        """Arguments split on commas, whitespace trimmed."""
        if not self.args.strip():
            return []
        return [part.strip() for part in self.args.split(",")]

    def __str__(self) -> str:
        return f"{self.name}({self.args})"


@dataclass(frozen=True)
class ExtenLine:
    """One `exten => E,P,Op(args)` line."""

    exten: str
    priority: int
    operation: OperationCall
    line_number: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.priority < 1:
            raise ValueError(f"Priority must be >= 1, got {self.priority}")


@dataclass
class DialplanDoc:
    """extensions.conf contents: ordered (context, lines) blocks."""

    contexts: list[tuple[str, list[ExtenLine]]] = field(default_factory=list)

    def context_names(self) -> list[str]:
        return [name for name, _ in self.contexts]

    def lines(self, context: str) -> list[ExtenLine]:
        for name, lines in self.contexts:
            if name == context:
                return lines
        raise KeyError(context)

    def all_lines(self):
        """Yield (context, ExtenLine) in file order."""
        for name, lines in self.contexts:
            for line in lines:
                yield name, line


@dataclass(frozen=True)
class MailboxEntry:
    """voicemail.conf `box => password, name, email` line."""

    mailbox: str
    password: str
    display_name: str
    email: str

    def __post_init__(self):
        if not self.mailbox.isdigit():
            raise ValueError(f"Mailbox must be digits: {self.mailbox!r}")
        if not self.password.isdigit():
            raise ValueError(f"Mailbox {self.mailbox}: password must be digits")
        if self.email.count("@") != 1:
            raise ValueError(f"Mailbox {self.mailbox}: invalid email {self.email!r}")
        for label, value in (("name", self.display_name), ("email", self.email)):
            if any(char in value for char in MAILBOX_FIELD_DELIMITERS):
                raise ValueError(
                    f"Mailbox {self.mailbox}: {label} {value!r} contains a delimiter (, ; or newline)"
                )


@dataclass(frozen=True)
class TunnelConfig:
    """pptpd.conf local address and inclusive remote pool."""

    localip: str
    pool_start: str
    pool_end: str

    def __post_init__(self):
        local = ipaddress.IPv4Address(self.localip)
        start = ipaddress.IPv4Address(self.pool_start)
        end = ipaddress.IPv4Address(self.pool_end)
        if end < start:
            raise ValueError(f"Empty remote pool {self.pool_start}-{self.pool_end}")
        if start <= local <= end:
            raise ValueError(f"localip {self.localip} lies inside the remote pool")

    @property
    def pool(self) -> list[str]:
        """Every pool address in ascending order."""
        start = int(ipaddress.IPv4Address(self.pool_start))
        end = int(ipaddress.IPv4Address(self.pool_end))
        return [str(ipaddress.IPv4Address(n)) for n in range(start, end + 1)]

    @property
    def pool_size(self) -> int:
        return int(ipaddress.IPv4Address(self.pool_end)) - int(ipaddress.IPv4Address(self.pool_start)) + 1


@dataclass(frozen=True)
class Credential:
    """chap-secrets row."""

    user: str
    secret: str
    service: str = "*"
    address: str = "*"


@dataclass
class CredentialTable:
    """chap-secrets contents, user names unique."""

    entries: list[Credential] = field(default_factory=list)

    def lookup(self, user: str) -> Credential | None:
        for entry in self.entries:
            if entry.user == user:
                return entry
        return None


@dataclass(frozen=True)
class ValidationIssue:
    """A finding of the cross-file validator.

    Attributes:
        severity: Issue severity level
        code: Issue code (e.g. UNMATCHED_CONTEXT, MISSING_MAILBOX)
        message: Human-readable description
        file: Dialect the issue was found in
        line: Line number when known
    """

    severity: IssueSeverity
    code: str
    message: str
    file: str
    line: int | None = None

    @property
    def is_error(self) -> bool:
        return self.severity == IssueSeverity.ERROR

    @property
    def location(self) -> str:
        return f"{self.file}:{self.line}" if self.line else self.file

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "file": self.file,
            "line": self.line,
        }


@dataclass
class ValidationReport:
    """Validator output. ok holds exactly when no issue is an error."""

    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(issue.is_error for issue in self.issues)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [issue for issue in self.issues if issue.is_error]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [issue for issue in self.issues if issue.severity == IssueSeverity.WARNING]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "issues": [issue.to_dict() for issue in self.issues],
        }
