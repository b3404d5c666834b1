"""Notification model for the mail sink."""

from dataclasses import dataclass

from .enums import NotificationCategory


@dataclass(frozen=True)
class Notification:
    """One mail handed to the sink.

    Attributes:
        to: Recipient address
        subject: Subject line
        body: Plain text body
        at: Virtual send time
        category: admin-alert or voicemail-notice
        receipt: Sink-assigned id, None until sent
    """

    to: str
    subject: str
    body: str
    at: float
    category: NotificationCategory
    receipt: int | None = None

    def __post_init__(self):
        if not self.to or not self.to.strip():
            raise ValueError("Notification recipient cannot be empty")

    def to_dict(self) -> dict:
        return {
            "receipt": self.receipt,
            "at": self.at,
            "category": self.category.value,
            "to": self.to,
            "subject": self.subject,
        }
