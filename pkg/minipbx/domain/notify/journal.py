"""Durable mbox form of the notification sink.

Every header derives from virtual time and the notification itself, so the
journal is byte-identical across runs.
"""

import email.utils
import mailbox
import os
from email.message import EmailMessage

from minipbx.infra.timefmt import virtual_datetime
from minipbx.models.enums import NotificationCategory
from minipbx.models.notification import Notification

SENDER = "minipbx@localhost"


def to_message(notification: Notification) -> EmailMessage:
    message = EmailMessage()
    message["From"] = SENDER
    message["To"] = notification.to
    message["Subject"] = notification.subject
    message["Date"] = email.utils.format_datetime(virtual_datetime(notification.at))
    message["X-Minipbx-Category"] = notification.category.value
    message["X-Minipbx-Receipt"] = str(notification.receipt)
    message.set_content(notification.body)
    return message


def write_journal(path: str, notifications: list[Notification]) -> None:
    """Write (replacing) an mbox holding the notifications in send order."""
    if os.path.exists(path):
        os.remove(path)
    box = mailbox.mbox(path, create=True)
    box.lock()
    try:
        for notification in notifications:
            entry = mailbox.mboxMessage(to_message(notification))
            entry.set_from(SENDER, virtual_datetime(notification.at).timetuple())
            box.add(entry)
        box.flush()
    finally:
        box.unlock()
        box.close()


def read_journal(path: str) -> list[Notification]:
    """Load notifications back from an mbox journal."""
    box = mailbox.mbox(path, create=False)
    try:
        notifications = []
        for entry in box:
            at = email.utils.parsedate_to_datetime(entry["Date"]).timestamp()
            body = entry.get_payload(decode=True) or b""
            notifications.append(
                Notification(
                    to=entry["To"],
                    subject=entry["Subject"],
                    body=body.decode("utf-8").rstrip("\n"),
                    at=at,
                    category=NotificationCategory(entry["X-Minipbx-Category"]),
                    receipt=int(entry["X-Minipbx-Receipt"]),
                )
            )
        return notifications
    finally:
        box.close()
