"""SIP signaling models.

SipMessage covers both requests and status responses of the SIP text
subset. Registration and CallSession are the registrar's and the call
engine's records.
"""

from dataclasses import dataclass, field, replace

from .enums import CallState, SipMethod

STATUS_REASONS: dict[int, str] = {
    100: "Trying",
    180: "Ringing",
    200: "OK",
    401: "Unauthorized",
    403: "Forbidden",
    404: "Not Found",
    408: "Request Timeout",
    480: "Temporarily Unavailable",
    481: "Call/Transaction Does Not Exist",
    503: "Service Unavailable",
}

# RFC 3261 compact header forms
COMPACT_HEADERS = {
    "i": "call-id",
    "f": "from",
    "t": "to",
    "m": "contact",
    "v": "via",
    "l": "content-length",
    "c": "content-type",
}

# Headers that may appear at most once (case-insensitively)
SINGLETON_HEADERS = frozenset({"from", "to", "cseq", "call-id"})


def canonical_header(name: str) -> str:
    """Lower-case header name with compact forms expanded."""
    lowered = name.strip().lower()
    return COMPACT_HEADERS.get(lowered, lowered)


@dataclass(frozen=True)
class SipUri:
    """sip:user@host[:port]."""

    user: str
    host: str
    port: int | None = None

    def __str__(self) -> str:
        if self.port is None:
            return f"sip:{self.user}@{self.host}"
        return f"sip:{self.user}@{self.host}:{self.port}"


@dataclass(frozen=True)
class SipMessage:
    """Request or status message.

    A request carries method and uri and no code; a status carries code and
    reason and no method.
    """

    method: SipMethod | None = None
    uri: SipUri | None = None
    code: int | None = None
    reason: str | None = None
    headers: tuple[tuple[str, str], ...] = ()
    body: bytes = b""

    def __post_init__(self):
        if self.method is not None:
            if self.uri is None or self.code is not None:
                raise ValueError("A request needs a method and uri and no status code")
        elif self.code is None:
            raise ValueError("A message is either a request or a status")
        seen: set[str] = set()
        for name, _ in self.headers:
            key = canonical_header(name)
            if key in SINGLETON_HEADERS:
                if key in seen:
                    raise ValueError(f"Duplicate {name} header")
                seen.add(key)

    @property
    def is_request(self) -> bool:
        return self.method is not None

    @classmethod
    def request(
        cls,
        method: SipMethod,
        uri: SipUri,
        headers: list[tuple[str, str]] | None = None,
        body: bytes = b"",
    ) -> "SipMessage":
        return cls(method=method, uri=uri, headers=tuple(headers or ()), body=body)

    @classmethod
    def status(
        cls,
        code: int,
        headers: list[tuple[str, str]] | None = None,
        body: bytes = b"",
        reason: str | None = None,
    ) -> "SipMessage":
        return cls(
            code=code,
            reason=reason or STATUS_REASONS[code],
            headers=tuple(headers or ()),
            body=body,
        )

    def header(self, name: str) -> str | None:
        """First value of a header, matched case-insensitively."""
        key = canonical_header(name)
        for header_name, value in self.headers:
            if canonical_header(header_name) == key:
                return value
        return None

    def with_header(self, name: str, value: str) -> "SipMessage":
        """Copy with one header replaced or appended."""
        key = canonical_header(name)
        headers = [h for h in self.headers if canonical_header(h[0]) != key]
        headers.append((name, value))
        return replace(self, headers=tuple(headers))

    @property
    def call_id(self) -> str | None:
        return self.header("Call-ID")

    def summary(self) -> str:
        if self.is_request:
            return f"Request: {self.method.value} {self.uri}"
        return f"Status: {self.code} {self.reason}"


@dataclass(frozen=True)
class Registration:
    """An authenticated binding of a peer to its contact address."""

    peer: str
    contact_host: str
    contact_port: int
    expires_at: float
    authenticated: bool = True

    def __post_init__(self):
        if not self.authenticated:
            raise ValueError("Only authenticated registrations are stored")
        if self.contact_port <= 0:
            raise ValueError(f"Contact port must be > 0, got {self.contact_port}")

    def to_dict(self) -> dict:
        return {
            "peer": self.peer,
            "contact": f"{self.contact_host}:{self.contact_port}",
            "expires_at": self.expires_at,
        }


@dataclass(frozen=True)
class CallSession:
    """One call between two peers."""

    id: str
    caller: str
    callee: str
    state: CallState = CallState.INVITING
    media: str | None = None
    history: tuple[CallState, ...] = field(default=(), compare=False)
