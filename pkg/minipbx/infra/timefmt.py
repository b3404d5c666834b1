"""Rendering of virtual time.

Virtual time is float seconds since the virtual epoch, which maps to the
Unix epoch for any calendar rendering.
"""

from datetime import datetime, timezone

UTC = timezone.utc


def virtual_datetime(at: float) -> datetime:
    return datetime.fromtimestamp(at, tz=UTC)


def iso_timestamp(at: float) -> str:
    """ISO-8601 form with millisecond precision, e.g. 1970-01-01T00:00:12.500+00:00."""
    return virtual_datetime(at).isoformat(timespec="milliseconds")
