"""Notification sink and its mbox journal."""

from minipbx.domain.notify.journal import read_journal, to_message, write_journal
from minipbx.domain.notify.sink import NotificationSink

__all__ = ["NotificationSink", "read_journal", "to_message", "write_journal"]
