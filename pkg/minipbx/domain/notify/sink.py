"""In-process mail sink standing in for the mail server."""

import logging
from dataclasses import replace

from minipbx.models.enums import NotificationCategory
from minipbx.models.notification import Notification

logger = logging.getLogger(__name__)


class NotificationSink:
    """Append-only notification store with increasing receipt ids."""

    def __init__(self):
        self._entries: list[Notification] = []
        self._next_receipt = 1

    def send(self, notification: Notification) -> int:
        """Record a notification and return its receipt id.

        Raises:
            ValueError: If the notification is older than the last one
        """
        if self._entries and notification.at < self._entries[-1].at:
            raise ValueError(
                f"Notification at {notification.at} precedes the last one at {self._entries[-1].at}"
            )
        receipt = self._next_receipt
        self._next_receipt += 1
        self._entries.append(replace(notification, receipt=receipt))
        logger.info("Mail #%d to %s: %s", receipt, notification.to, notification.subject)
        return receipt

    def drain(
        self,
        category: NotificationCategory | None = None,
        recipient: str | None = None,
    ) -> list[Notification]:
        """Matching notifications in send order. Nothing is removed."""
        return [
            n
            for n in self._entries
            if (category is None or n.category == category)
            and (recipient is None or n.to == recipient)
        ]

    def __len__(self) -> int:
        return len(self._entries)
