"""GRANT / REVOKE statement parser.

    GRANT  privs ON scope TO        'user'@host [IDENTIFIED BY 'pw'] [;]
    REVOKE privs ON scope FROM|TO   'user'@host [IDENTIFIED BY 'pw'] [;]

Keywords are case-insensitive; `ALL [PRIVILEGES]` expands to every access
privilege. An IDENTIFIED BY clause on REVOKE is accepted and ignored.
"""

import re

from minipbx.exceptions import StatementParseError
from minipbx.models.acl import (
    ACCESS_PRIVILEGES,
    GrantStatement,
    ObjectScope,
    Principal,
    RevokeStatement,
    normalize_privilege,
)

_STATEMENT_RE = re.compile(
    r"""^\s*\$?\s*(?P<verb>GRANT|REVOKE)\s+
        (?P<privs>.+?)\s+
        ON\s+(?P<scope>\S+)\s+
        (?P<prep>TO|FROM)\s+
        (?P<principal>\S+?)
        (?:\s+IDENTIFIED\s+BY\s+(?P<password>'[^']*'|"[^"]*"|[^\s;]+))?
        \s*;?\s*$""",
    re.IGNORECASE | re.VERBOSE,
)


def parse_privileges(text: str) -> tuple[str, ...]:
    """Comma-separated privilege list, ALL expanded, duplicates dropped.

    Raises:
        StatementParseError: For an unknown privilege name
    """
    names: list[str] = []
    for raw in text.split(","):
        token = " ".join(raw.split()).upper()
        if token in ("ALL", "ALL PRIVILEGES"):
            candidates = list(ACCESS_PRIVILEGES)
        else:
            try:
                candidates = [normalize_privilege(token)]
            except ValueError as e:
                raise StatementParseError(str(e)) from None
        names.extend(name for name in candidates if name not in names)
    return tuple(names)


def parse_statement(text: str) -> GrantStatement | RevokeStatement:
    """Parse one statement.

    Raises:
        StatementParseError: Malformed statement, unknown privilege, bad
            scope, or a preposition not matching the verb
    """
    match = _STATEMENT_RE.match(text)
    if not match:
        raise StatementParseError(f"Malformed statement: {text.strip()!r}")

    verb = match.group("verb").upper()
    if verb == "GRANT" and match.group("prep").upper() != "TO":
        raise StatementParseError("GRANT takes TO, not FROM")

    privileges = parse_privileges(match.group("privs"))
    try:
        scope = ObjectScope.parse(match.group("scope"))
        principal = Principal.parse(match.group("principal"))
    except ValueError as e:
        raise StatementParseError(str(e)) from None

    if verb == "GRANT":
        password = match.group("password")
        if password is not None:
            password = password.strip("'\"")
        return GrantStatement(privileges, scope, principal, password)
    return RevokeStatement(privileges, scope, principal)
