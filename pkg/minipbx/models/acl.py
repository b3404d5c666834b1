"""Privilege model for the attendance datastore."""

from dataclasses import dataclass

from .enums import PrivilegeKind

ACCESS_PRIVILEGES = (
    "ALTER",
    "CREATE",
    "DELETE",
    "DROP",
    "INDEX",
    "INSERT",
    "SELECT",
    "UPDATE",
)

ADMIN_PRIVILEGES = (
    "CREATE TEMPORARY TABLES",
    "FILE",
    "GRANT OPTION",
    "LOCK TABLES",
    "PROCESS",
    "RELOAD",
    "SUPER",
    "SHUTDOWN",
    "SHOW DATABASES",
    "REPLICATION CLIENT",
    "REPLICATION SLAVE",
)

# Alternate spellings accepted on input
PRIVILEGE_ALIASES = {"SHUT DOWN": "SHUTDOWN"}

ANY_HOST = "%"
WILDCARD = "*"


def normalize_privilege(name: str) -> str:
    """Canonical upper-case privilege name, single-spaced.

    Raises:
        ValueError: If the name is not a known privilege
    """
    canonical = " ".join(name.upper().split())
    canonical = PRIVILEGE_ALIASES.get(canonical, canonical)
    if canonical not in ACCESS_PRIVILEGES and canonical not in ADMIN_PRIVILEGES:
        raise ValueError(f"Unknown privilege: {name!r}")
    return canonical


def privilege_kind(name: str) -> PrivilegeKind:
    canonical = normalize_privilege(name)
    if canonical in ACCESS_PRIVILEGES:
        return PrivilegeKind.ACCESS
    return PrivilegeKind.ADMINISTRATIVE


@dataclass(frozen=True, order=True)
class Principal:
    """user@host. Host "%" matches any host."""

    user: str
    host: str = ANY_HOST

    def __post_init__(self):
        if not self.user:
            raise ValueError("Principal user cannot be empty")

    @classmethod
    def parse(cls, text: str) -> "Principal":
        """Parse user@host, tolerating quotes around either part."""
        user, sep, host = text.strip().rpartition("@")
        if not sep:
            user, host = text.strip(), ANY_HOST
        return cls(user.strip("'\"`"), host.strip("'\"`") or ANY_HOST)

    def matches(self, other: "Principal") -> bool:
        """Whether this grant holder stands for the principal `other`."""
        return self.user == other.user and self.host in (ANY_HOST, other.host)

    def __str__(self) -> str:
        return f"{self.user}@{self.host}"


@dataclass(frozen=True, order=True)
class ObjectScope:
    """database.table, either part possibly "*"."""

    database: str = WILDCARD
    table: str = WILDCARD

    @classmethod
    def parse(cls, text: str) -> "ObjectScope":
        """Parse "db.tbl", "db.*" or "*.*".

        Raises:
            ValueError: If the text is not a two-part scope
        """
        parts = text.strip().strip("`").split(".")
        if len(parts) != 2 or not all(part.strip("`") for part in parts):
            raise ValueError(f"Malformed scope: {text!r}")
        database, table = (part.strip("`") for part in parts)
        return cls(database, table)

    def covers(self, other: "ObjectScope") -> bool:
        """Whether every object named by `other` is inside this scope."""
        if self.database != WILDCARD and self.database != other.database:
            return False
        if self.table != WILDCARD and self.table != other.table:
            return False
        return True

    def __str__(self) -> str:
        return f"{self.database}.{self.table}"


@dataclass(frozen=True, order=True)
class GrantTriple:
    """One stored (principal, scope, privilege) fact."""

    principal: Principal
    scope: ObjectScope
    privilege: str

    def to_dict(self) -> dict:
        return {
            "principal": str(self.principal),
            "scope": str(self.scope),
            "privilege": self.privilege,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GrantTriple":
        return cls(
            principal=Principal.parse(data["principal"]),
            scope=ObjectScope.parse(data["scope"]),
            privilege=normalize_privilege(data["privilege"]),
        )


@dataclass(frozen=True)
class GrantStatement:
    """GRANT privs ON scope TO principal [IDENTIFIED BY password]."""

    privileges: tuple[str, ...]
    scope: ObjectScope
    principal: Principal
    password: str | None = None

    def triples(self) -> list[GrantTriple]:
        return [GrantTriple(self.principal, self.scope, p) for p in self.privileges]


@dataclass(frozen=True)
class RevokeStatement:
    """REVOKE privs ON scope FROM|TO principal."""

    privileges: tuple[str, ...]
    scope: ObjectScope
    principal: Principal

    def triples(self) -> list[GrantTriple]:
        return [GrantTriple(self.principal, self.scope, p) for p in self.privileges]


@dataclass(frozen=True)
class StudentRecord:
    """Attendance store row. Passwords are kept as MD5 hex digests."""

    student_id: str
    password_digest: str
    attendance: int

    def __post_init__(self):
        if not self.student_id.isdigit():
            raise ValueError(f"Student id must be digits: {self.student_id!r}")
        if not 0 <= self.attendance <= 100:
            raise ValueError(f"Attendance out of range: {self.attendance}")
