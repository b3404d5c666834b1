"""Voicemail boxes, deposits with owner notification, and the VoiceMailMain menu."""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field, replace

from minipbx.constants import PROMPT_VM_INCORRECT, PROMPT_VM_INTRO, PROMPT_VM_PASSWORD, PROMPT_VM_YOUHAVE
from minipbx.domain.dialplan import Action, DigitsInput
from minipbx.domain.notify import NotificationSink
from minipbx.exceptions import MailboxAuthError, MailboxNotFoundError
from minipbx.infra.timefmt import iso_timestamp
from minipbx.models.conf import MailboxEntry, split_mailbox_ref
from minipbx.models.enums import ActionKind, AwaitKind, EventKind, NotificationCategory
from minipbx.models.notification import Notification
from minipbx.models.security import SecurityEvent

logger = logging.getLogger(__name__)

MENU_ATTEMPTS = 3


@dataclass(frozen=True)
class VoicemailMessage:
    box: str
    context: str
    from_peer: str
    deposited_at: float
    payload_ref: str

    def journal_line(self) -> str:
        """ISO-8601 virtual timestamp, box@context, caller, payload reference."""
        return "\t".join(
            [iso_timestamp(self.deposited_at), f"{self.box}@{self.context}", self.from_peer, self.payload_ref]
        )


@dataclass
class VoiceMailbox:
    box: str
    context: str
    password: str
    owner_email: str
    display_name: str = ""
    messages: list[VoicemailMessage] = field(default_factory=list)

    @classmethod
    def from_entry(cls, entry: MailboxEntry, context: str) -> "VoiceMailbox":
        return cls(entry.mailbox, context, entry.password, entry.email, entry.display_name)

    @property
    def ref(self) -> str:
        return f"{self.box}@{self.context}"


class MailboxStore:
    """All configured boxes plus the deposit journal in deposit order."""

    def __init__(
        self,
        mailboxes: dict[str, list[MailboxEntry]],
        on_event: Callable[[SecurityEvent], None] | None = None,
    ):
        self.boxes: dict[tuple[str, str], VoiceMailbox] = {}
        for context, entries in mailboxes.items():
            for entry in entries:
                self.boxes[(entry.mailbox, context)] = VoiceMailbox.from_entry(entry, context)
        self.on_event = on_event
        self.deposits: list[VoicemailMessage] = []

    def resolve(self, ref: str) -> VoiceMailbox:
        """Box for "box@context".

        Raises:
            MailboxNotFoundError: Malformed or unknown reference
        """
        try:
            box, context = split_mailbox_ref(ref)
        except ValueError as e:
            raise MailboxNotFoundError(str(e)) from None
        mailbox = self.boxes.get((box, context))
        if mailbox is None:
            raise MailboxNotFoundError(f"No mailbox {ref}")
        return mailbox

    def find(self, box: str, context: str | None = None) -> VoiceMailbox:
        if context is not None:
            return self.resolve(f"{box}@{context}")
        matches = [mb for (number, _), mb in sorted(self.boxes.items()) if number == box]
        if not matches:
            raise MailboxNotFoundError(f"No mailbox {box}")
        return matches[0]

    def journal_lines(self) -> list[str]:
        return [message.journal_line() for message in self.deposits]

    def report_failure(self, mailbox: VoiceMailbox, src: str | None, at: float) -> None:
        logger.info("wrong voicemail password for %s from %s", mailbox.ref, src or "local")
        if self.on_event and src:
            self.on_event(
                SecurityEvent(EventKind.AUTH_FAILURE, src, at, f"voicemail password for {mailbox.ref}")
            )


def deposit_voicemail(
    ref: str,
    from_peer: str,
    payload: str,
    at: float,
    store: MailboxStore,
    notifier: NotificationSink,
) -> int:
    """Append a message and notify the box owner.

    Returns:
        Receipt id of the voicemail notice

    Raises:
        MailboxNotFoundError: If the reference does not resolve
    """
    mailbox = store.resolve(ref)
    message = VoicemailMessage(mailbox.box, mailbox.context, from_peer, at, payload)
    mailbox.messages.append(message)
    store.deposits.append(message)
    logger.info("voicemail from %s deposited in %s", from_peer, mailbox.ref)
    return notifier.send(
        Notification(
            to=mailbox.owner_email,
            subject=f"New voicemail from {from_peer} in mailbox {mailbox.box}",
            body=(
                f"Mailbox: {mailbox.ref}\n"
                f"From: {from_peer}\n"
                f"Received: {iso_timestamp(at)}\n"
                f"Message: {payload}\n"
            ),
            at=at,
            category=NotificationCategory.VOICEMAIL_NOTICE,
        )
    )


def retrieve_voicemail(
    box: str,
    password: str,
    store: MailboxStore,
    context: str | None = None,
    src: str | None = None,
    at: float = 0.0,
) -> list[VoicemailMessage]:
    """Messages of a box in deposit order.

    Raises:
        MailboxNotFoundError: Unknown box
        MailboxAuthError: Wrong password; also reported as an auth-failure
            event when the caller's address is known
    """
    mailbox = store.find(box, context)
    if password != mailbox.password:
        store.report_failure(mailbox, src, at)
        raise MailboxAuthError(f"Wrong password for mailbox {mailbox.ref}")
    return list(mailbox.messages)


@dataclass(frozen=True)
class MenuSession:
    ref: str
    src: str | None = None
    attempts: int = 0
    status: str | None = None

    @property
    def done(self) -> bool:
        return self.status is not None


class VoicemailMenu:
    """VoiceMailMain: password prompt, then the message count."""

    def __init__(self, store: MailboxStore, read_timeout: float = 5.0, attempts: int = MENU_ATTEMPTS):
        self.store = store
        self.read_timeout = read_timeout
        self.attempts = attempts

    def _prompt(self, token: str) -> Action:
        return Action(ActionKind.READ, "VMPW", prompt=token, timeout=self.read_timeout, awaits=AwaitKind.DIGITS)

    def start(self, session: MenuSession) -> tuple[list[Action], MenuSession]:
        """
        Raises:
            MailboxNotFoundError: If the box reference does not resolve
        """
        self.store.resolve(session.ref)
        return [self._prompt(PROMPT_VM_PASSWORD)], session

    def enter(self, session: MenuSession, digits: DigitsInput, at: float) -> tuple[list[Action], MenuSession]:
        if digits.timed_out and not digits.value:
            return [], replace(session, status="timeout")

        box, context = split_mailbox_ref(session.ref)
        try:
            messages = retrieve_voicemail(box, digits.value, self.store, context, session.src, at)
        except MailboxAuthError:
            session = replace(session, attempts=session.attempts + 1)
            if session.attempts >= self.attempts:
                return [Action(ActionKind.PLAY, PROMPT_VM_INCORRECT)], replace(session, status="auth-failed")
            return [Action(ActionKind.PLAY, PROMPT_VM_INCORRECT), self._prompt(PROMPT_VM_PASSWORD)], session

        actions = [
            Action(ActionKind.PLAY, PROMPT_VM_YOUHAVE),
            Action(ActionKind.SAY_DIGITS, str(len(messages))),
            Action(ActionKind.PLAY, PROMPT_VM_INTRO),
        ]
        return actions, replace(session, status="ok")
