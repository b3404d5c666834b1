"""Sentinel models: security events, alerts, rate rules and the blacklist."""

from dataclasses import dataclass

from minipbx.constants import ACTIONABLE_LEVEL, MAX_ALERT_LEVEL

from .enums import EventKind


@dataclass(frozen=True)
class SecurityEvent:
    """Something the sentinel should judge.

    Attributes:
        kind: Event vocabulary entry
        src: Source address the event is attributed to
        at: Virtual time
        detail: Free text carried into the alert description
        ignorable: Explicitly marked as noise (always level 0)
    """

    kind: EventKind
    src: str
    at: float
    detail: str = ""
    ignorable: bool = False


@dataclass(frozen=True)
class Alert:
    """A classified event."""

    level: int
    src: str
    at: float
    rule_id: int
    description: str

    def __post_init__(self):
        if not 0 <= self.level <= MAX_ALERT_LEVEL:
            raise ValueError(f"Alert level out of range: {self.level}")

    @property
    def actionable(self) -> bool:
        return self.level >= ACTIONABLE_LEVEL

    def log_line(self) -> str:
        """Tab-separated alert log record."""
        return f"{self.at:.3f}\t{self.level}\t{self.src}\t{self.rule_id}\t{self.description}"

    def to_dict(self) -> dict:
        return {
            "at": self.at,
            "level": self.level,
            "src": self.src,
            "rule_id": self.rule_id,
            "description": self.description,
        }


@dataclass(frozen=True)
class RateRule:
    """Per-source flood threshold: more than `threshold` requests in `window` seconds."""

    threshold: int = 10
    window: float = 60.0
    scope: str = "per-src"

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError(f"Rate threshold must be >= 1, got {self.threshold}")
        if self.window <= 0:
            raise ValueError(f"Rate window must be > 0, got {self.window}")


@dataclass(frozen=True)
class ResponseCommand:
    """Instruction to blacklist a source."""

    src: str
    at: float
    level: int
    rule_id: int
    reason: str


@dataclass(frozen=True)
class BlacklistEntry:
    """A blocked source."""

    src: str
    since: float
    reason: str
    level: int

    def to_dict(self) -> dict:
        return {
            "src": self.src,
            "since": self.since,
            "reason": self.reason,
            "level": self.level,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BlacklistEntry":
        return cls(
            src=data["src"],
            since=float(data["since"]),
            reason=data.get("reason", ""),
            level=int(data.get("level", 10)),
        )
