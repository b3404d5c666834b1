"""Handler for pbxctl mail commands."""

import os

from minipbx.domain.notify import read_journal
from minipbx.handlers.base import BaseHandler
from minipbx.models.enums import NotificationCategory


class MailHandler(BaseHandler):
    """Reads the mbox journal a scenario run leaves behind."""

    def list_mail(self, journal: str, category: str | None = None, format: str = "text") -> str:
        """
        Raises:
            ValueError: Unknown category
            FileNotFoundError: Journal missing
        """
        wanted = NotificationCategory(category) if category else None
        if not os.path.exists(journal):
            raise FileNotFoundError(f"No mail journal at {journal}")
        notifications = [
            n for n in read_journal(journal) if wanted is None or n.category is wanted
        ]
        return self.formatter.format_mail(notifications, format)
