"""Grant table with revoke shadows.

GRANT and REVOKE act on exactly the scope they name. A REVOKE of a scope
that a broader stored grant still covers records a shadow: the shadowed
objects are denied although the broader grant covers them. GRANT of a
shadowed triple stores it and lifts the shadow. A shadow is dropped once
no broader grant is left for it to cut into. On any object the most
specific stored grant or shadow decides.
"""

import copy
import hashlib
import logging

from minipbx.models.acl import (
    ACCESS_PRIVILEGES,
    ADMIN_PRIVILEGES,
    GrantStatement,
    GrantTriple,
    ObjectScope,
    Principal,
    RevokeStatement,
    normalize_privilege,
)
from minipbx.models.state import PbxState

logger = logging.getLogger(__name__)


def password_digest(password: str) -> str:
    return hashlib.md5(password.encode("utf-8")).hexdigest()


class GrantTable:
    """Stored grants, shadows and principal passwords."""

    def __init__(
        self,
        grants: set[GrantTriple] | None = None,
        shadows: set[GrantTriple] | None = None,
        passwords: dict[str, str] | None = None,
    ):
        self.grants: set[GrantTriple] = set(grants or ())
        self.shadows: set[GrantTriple] = set(shadows or ())
        self.passwords: dict[str, str] = dict(passwords or {})

    @classmethod
    def from_state(cls, state: PbxState) -> "GrantTable":
        return cls(state.grants, state.shadows, state.passwords)

    def store_into(self, state: PbxState) -> None:
        state.grants = set(self.grants)
        state.shadows = set(self.shadows)
        state.passwords = dict(self.passwords)

    def copy(self) -> "GrantTable":
        return copy.deepcopy(self)

    def snapshot(self) -> tuple[frozenset, frozenset]:
        """Comparable view of the privilege facts."""
        return frozenset(self.grants), frozenset(self.shadows)

    def apply(self, statement: GrantStatement | RevokeStatement) -> list[str]:
        """Apply a statement in place.

        Returns:
            Warnings, one per revoked triple that nothing granted
        """
        if isinstance(statement, GrantStatement):
            for triple in statement.triples():
                self._grant(triple)
            if statement.password is not None:
                self.passwords[str(statement.principal)] = password_digest(statement.password)
            return []

        warnings = []
        for triple in statement.triples():
            warning = self._revoke(triple)
            if warning:
                logger.warning(warning)
                warnings.append(warning)
        return warnings

    def _grant(self, triple: GrantTriple) -> None:
        self.grants.add(triple)
        self.shadows.discard(triple)

    def _revoke(self, triple: GrantTriple) -> str | None:
        removed = triple in self.grants
        self.grants.discard(triple)
        if self._covered_by_broader(triple):
            self.shadows.add(triple)
        elif not removed:
            return f"REVOKE {triple.privilege} on {triple.scope} from {triple.principal}: nothing granted"
        if removed:
            self._drop_orphan_shadows(triple)
        return None

    def _covered_by_broader(self, triple: GrantTriple) -> bool:
        return any(
            g.principal == triple.principal
            and g.privilege == triple.privilege
            and g.scope != triple.scope
            and g.scope.covers(triple.scope)
            for g in self.grants
        )

    def _drop_orphan_shadows(self, removed: GrantTriple) -> None:
        """Shadows left without a broader stored grant no longer mask anything."""
        orphans = {
            shadow
            for shadow in self.shadows
            if shadow.principal == removed.principal
            and shadow.privilege == removed.privilege
            and not self._covered_by_broader(shadow)
        }
        self.shadows -= orphans

    def check(self, principal: Principal, privilege: str, obj: ObjectScope) -> bool:
        """Whether the principal holds the privilege on the object."""
        privilege = normalize_privilege(privilege)
        for grant in self.grants:
            if (
                grant.privilege == privilege
                and grant.principal.matches(principal)
                and grant.scope.covers(obj)
                and not self._masked(grant, obj)
            ):
                return True
        return False

    def check_admin(self, principal: Principal, privilege: str) -> bool:
        """Administrative privileges are global: checked on *.*."""
        privilege = normalize_privilege(privilege)
        if privilege not in ADMIN_PRIVILEGES:
            raise ValueError(f"{privilege} is not an administrative privilege")
        return self.check(principal, privilege, ObjectScope())

    def _masked(self, grant: GrantTriple, obj: ObjectScope) -> bool:
        return any(
            shadow.principal == grant.principal
            and shadow.privilege == grant.privilege
            and shadow.scope.covers(obj)
            and grant.scope.covers(shadow.scope)
            for shadow in self.shadows
        )

    def privileges_of(self, principal: Principal, obj: ObjectScope) -> list[str]:
        return [p for p in ACCESS_PRIVILEGES if self.check(principal, p, obj)]


def apply_statement(statement: GrantStatement | RevokeStatement, table: GrantTable) -> GrantTable:
    """Pure form of GrantTable.apply: returns a new table."""
    updated = table.copy()
    updated.apply(statement)
    return updated
