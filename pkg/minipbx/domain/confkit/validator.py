"""Cross-file consistency checks.

The validator never raises; it reports. Startup refuses to continue when
the report carries an error (see ConfigValidationError).

Issue codes:
- UNMATCHED_CONTEXT: dial-plan context no peer or mailbox context names
- MISSING_MAILBOX: VoiceMailMain target or peer mailbox does not resolve
- BAD_MAILBOX_REF: VoiceMailMain argument is not box@context
- UNKNOWN_OPERATION: operation the interpreter does not execute (warning)
- UNKNOWN_DIAL_TARGET: Dial() names a peer absent from sip.conf (warning)
"""

import logging

from minipbx.models.conf import (
    DialplanDoc,
    MailboxEntry,
    PeerEntry,
    ValidationIssue,
    ValidationReport,
    split_mailbox_ref,
)
from minipbx.models.enums import IssueSeverity

logger = logging.getLogger(__name__)


def _mailbox_index(mailboxes: dict[str, list[MailboxEntry]]) -> set[tuple[str, str]]:
    return {(entry.mailbox, context) for context, entries in mailboxes.items() for entry in entries}


def validate_cross(
    peers: list[PeerEntry],
    doc: DialplanDoc,
    mailboxes: dict[str, list[MailboxEntry]],
) -> ValidationReport:
    """Check references between sip.conf, extensions.conf and voicemail.conf.

    Issues are sorted, so the report does not depend on input order.
    """
    issues: list[ValidationIssue] = []
    known_contexts = {peer.context for peer in peers} | set(mailboxes)
    boxes = _mailbox_index(mailboxes)
    peer_names = {peer.name for peer in peers}

    for context in doc.context_names():
        if context not in known_contexts:
            issues.append(
                ValidationIssue(
                    IssueSeverity.ERROR,
                    "UNMATCHED_CONTEXT",
                    f"context {context} unmatched by any peer or mailbox context",
                    "extensions.conf",
                )
            )

    for context, line in doc.all_lines():
        op = line.operation
        name = op.name.lower()
        if not op.is_known:
            issues.append(
                ValidationIssue(
                    IssueSeverity.WARNING,
                    "UNKNOWN_OPERATION",
                    f"{context}/{line.exten}/{line.priority}: unknown operation {op.name}",
                    "extensions.conf",
                    line.line_number or None,
                )
            )
        elif name == "voicemailmain":
            issues.extend(_check_voicemail_target(op.args.strip(), boxes, line.line_number))
        elif name == "dial":
            target = (op.arg_list() or [""])[0]
            peer = target.split("/", 1)[-1]
            if peer and peer not in peer_names:
                issues.append(
                    ValidationIssue(
                        IssueSeverity.WARNING,
                        "UNKNOWN_DIAL_TARGET",
                        f"Dial target {target} is not a sip.conf peer",
                        "extensions.conf",
                        line.line_number or None,
                    )
                )

    for peer in peers:
        if peer.mailbox and split_mailbox_ref(peer.mailbox) not in boxes:
            issues.append(
                ValidationIssue(
                    IssueSeverity.ERROR,
                    "MISSING_MAILBOX",
                    f"peer {peer.name}: mailbox {peer.mailbox} not found",
                    "sip.conf",
                )
            )

    issues.sort(key=lambda i: (i.file, i.line or 0, i.code, i.message))
    report = ValidationReport(issues)
    for issue in report.warnings:
        logger.warning("%s: %s", issue.location, issue.message)
    return report


def _check_voicemail_target(
    ref: str, boxes: set[tuple[str, str]], line_number: int
) -> list[ValidationIssue]:
    try:
        target = split_mailbox_ref(ref)
    except ValueError:
        return [
            ValidationIssue(
                IssueSeverity.ERROR,
                "BAD_MAILBOX_REF",
                f"VoiceMailMain({ref}): expected box@context",
                "extensions.conf",
                line_number or None,
            )
        ]
    if target not in boxes:
        return [
            ValidationIssue(
                IssueSeverity.ERROR,
                "MISSING_MAILBOX",
                f"VoiceMailMain target {ref} not found",
                "extensions.conf",
                line_number or None,
            )
        ]
    return []
