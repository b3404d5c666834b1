"""Handler for pbxctl db commands: grants and the attendance store."""

import json
import logging

from minipbx.domain.acl import AttendanceStore, GrantTable, StoreGateway, parse_statement
from minipbx.exceptions import AccessDeniedError
from minipbx.handlers.base import BaseHandler
from minipbx.models.acl import GrantStatement, ObjectScope, Principal

logger = logging.getLogger(__name__)


class DbHandler(BaseHandler):
    """GRANT/REVOKE against the persisted grant table."""

    def grant(self, text: str, acting_as: str | None = None, state_path: str | None = None) -> str:
        return self._apply(text, GrantStatement, acting_as, state_path)

    def revoke(self, text: str, acting_as: str | None = None, state_path: str | None = None) -> str:
        return self._apply(text, None, acting_as, state_path)

    def _apply(self, text: str, expected, acting_as: str | None, state_path: str | None) -> str:
        """Parse, authorize and apply one statement.

        Without --as the statement is issued by the local administrator.

        Raises:
            StatementParseError: Malformed statement
            ValueError: A REVOKE given to grant or a GRANT given to revoke
            AccessDeniedError: The acting principal lacks GRANT OPTION
        """
        statement = parse_statement(text)
        if (expected is GrantStatement) != isinstance(statement, GrantStatement):
            verb = "GRANT" if expected is GrantStatement else "REVOKE"
            raise ValueError(f"Expected a {verb} statement")

        manager = self.state_manager(state_path)
        state = manager.load_state()
        table = GrantTable.from_state(state)
        if acting_as is not None:
            actor = Principal.parse(acting_as)
            if not table.check_admin(actor, "GRANT OPTION"):
                raise AccessDeniedError(str(actor), "GRANT OPTION", "*.*")

        warnings = table.apply(statement)
        table.store_into(state)
        manager.save_state(state)
        lines = [f"Warning: {w}" for w in warnings]
        verb = "Granted" if isinstance(statement, GrantStatement) else "Revoked"
        lines.append(
            f"{verb} {', '.join(statement.privileges)} on {statement.scope} for {statement.principal}"
        )
        return "\n".join(lines)

    def check(
        self,
        principal: str,
        privilege: str,
        obj: str,
        state_path: str | None = None,
        format: str = "text",
    ) -> tuple[str, bool]:
        """
        Raises:
            ValueError: Unknown privilege or malformed object
        """
        state = self.state_manager(state_path).load_state()
        table = GrantTable.from_state(state)
        who = Principal.parse(principal)
        scope = ObjectScope.parse(obj)
        allowed = table.check(who, privilege, scope)
        return self.formatter.format_check(str(who), privilege.upper(), str(scope), allowed, format), allowed

    def query(
        self,
        student_id: str,
        attendance_db: str,
        acting_as: str | None = None,
        state_path: str | None = None,
        settings_path: str | None = None,
        format: str = "text",
    ) -> str:
        """Read one attendance value the way the IVR does.

        Raises:
            AccessDeniedError: Principal lacks SELECT on the table
            StudentNotFoundError: No row for the id
        """
        settings = self.load_settings(settings_path)
        state = self.state_manager(state_path).load_state()
        store = AttendanceStore.from_tsv(self.fs.read_file(attendance_db))
        gateway = StoreGateway(store, GrantTable.from_state(state), settings.attendance_table)
        principal = Principal.parse(acting_as or settings.ivr_principal)
        gateway.start()
        try:
            attendance = gateway.query_attendance(principal, student_id)
        finally:
            gateway.stop()
        if format == "json":
            return json.dumps({"student": student_id, "attendance": attendance}, indent=2)
        return f"{student_id}\t{attendance}"
