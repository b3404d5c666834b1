"""Attendance store and the privilege-checked gateway in front of it."""

import hashlib
import logging
from collections.abc import Callable

from minipbx.exceptions import (
    AccessDeniedError,
    StoreUnavailableError,
    StudentNotFoundError,
)
from minipbx.models.acl import ObjectScope, Principal, StudentRecord
from minipbx.models.enums import EventKind, ServiceState
from minipbx.models.security import SecurityEvent

from .grants import GrantTable

logger = logging.getLogger(__name__)


class AttendanceStore:
    """Student rows keyed by id. Persisted as TSV: id, md5(password), attendance."""

    def __init__(self, records: dict[str, StudentRecord] | None = None):
        self.records: dict[str, StudentRecord] = dict(records or {})

    def add(self, student_id: str, password: str, attendance: int) -> StudentRecord:
        record = StudentRecord(
            student_id=student_id,
            password_digest=hashlib.md5(password.encode("utf-8")).hexdigest(),
            attendance=attendance,
        )
        self.records[student_id] = record
        return record

    def get(self, student_id: str) -> StudentRecord | None:
        return self.records.get(student_id)

    def __len__(self) -> int:
        return len(self.records)

    @classmethod
    def from_tsv(cls, text: str) -> "AttendanceStore":
        """Load rows, skipping blank and '#' lines.

        Raises:
            ValueError: For a row without three fields or with bad values
        """
        store = cls()
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"attendance row {number}: expected 3 fields, got {len(parts)}")
            student_id, digest, attendance = parts
            store.records[student_id] = StudentRecord(student_id, digest, int(attendance))
        return store

    def to_tsv(self) -> str:
        rows = [
            f"{r.student_id}\t{r.password_digest}\t{r.attendance}"
            for r in sorted(self.records.values(), key=lambda r: r.student_id)
        ]
        return "".join(row + "\n" for row in rows)


class StoreGateway:
    """The store as a service: every read is privilege-checked.

    Denied reads are reported through `on_event` as access-denied events so
    the sentinel sees them.
    """

    def __init__(
        self,
        store: AttendanceStore,
        grants: GrantTable,
        table: str = "school.attendance",
        on_event: Callable[[SecurityEvent], None] | None = None,
    ):
        self.store = store
        self.grants = grants
        self.table = ObjectScope.parse(table)
        self.on_event = on_event
        self.state = ServiceState.STOPPED
        self.queries = 0

    def start(self) -> None:
        self.state = ServiceState.RUNNING
        logger.info("attendance store up (%d rows)", len(self.store))

    def stop(self) -> None:
        self.state = ServiceState.STOPPED
        logger.info("attendance store down")

    @property
    def running(self) -> bool:
        return self.state is ServiceState.RUNNING

    def _read(self, principal: Principal, student_id: str, src: str, at: float) -> StudentRecord | None:
        if not self.running:
            raise StoreUnavailableError("attendance store is not running")
        if not self.grants.check(principal, "SELECT", self.table):
            logger.warning("%s denied SELECT on %s", principal, self.table)
            if self.on_event:
                self.on_event(
                    SecurityEvent(
                        EventKind.ACCESS_DENIED,
                        src,
                        at,
                        f"{principal} denied SELECT on {self.table}",
                    )
                )
            raise AccessDeniedError(str(principal), "SELECT", str(self.table))
        self.queries += 1
        return self.store.get(student_id)

    def authenticate(
        self,
        principal: Principal,
        student_id: str,
        password: str,
        src: str = "127.0.0.1",
        at: float = 0.0,
    ) -> bool:
        """Exact id and password match.

        Raises:
            StoreUnavailableError: Store not running
            AccessDeniedError: Principal lacks SELECT on the table
        """
        record = self._read(principal, student_id, src, at)
        if record is None:
            return False
        digest = hashlib.md5(password.encode("utf-8")).hexdigest()
        return digest == record.password_digest

    def query_attendance(
        self,
        principal: Principal,
        student_id: str,
        src: str = "127.0.0.1",
        at: float = 0.0,
    ) -> int:
        """Attendance percentage of one student.

        Raises:
            StoreUnavailableError: Store not running
            AccessDeniedError: Principal lacks SELECT on the table
            StudentNotFoundError: No row for the id
        """
        record = self._read(principal, student_id, src, at)
        if record is None:
            raise StudentNotFoundError(f"No student {student_id}")
        return record.attendance
