"""Database access control and the attendance store."""

from .grants import GrantTable, apply_statement, password_digest
from .statement import parse_privileges, parse_statement
from .store import AttendanceStore, StoreGateway

__all__ = [
    "AttendanceStore",
    "GrantTable",
    "StoreGateway",
    "apply_statement",
    "parse_privileges",
    "parse_statement",
    "password_digest",
]
