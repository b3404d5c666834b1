"""Text renderers for the configuration documents.

Each renderer emits text its parser reads back to an equal document.
"""

import shlex

from minipbx.models.conf import CredentialTable, DialplanDoc, MailboxEntry, PeerEntry, TunnelConfig


def serialize_sip_conf(peers: list[PeerEntry]) -> str:
    blocks = []
    for peer in peers:
        lines = [f"[{peer.name}]", f"type={peer.type.value}"]
        if peer.username:
            lines.append(f"username={peer.username}")
        lines.append(f"host={peer.host}")
        if peer.secret:
            lines.append(f"secret={peer.secret}")
        lines.append(f"dtmfmode={peer.dtmfmode}")
        if peer.insecure:
            lines.append(f"insecure={peer.insecure}")
        lines.append(f"canreinvite={peer.canreinvite}")
        lines.append(f"nat={peer.nat}")
        lines.append(f"qualify={peer.qualify}")
        if peer.mailbox:
            lines.append(f"mailbox={peer.mailbox}")
        lines.append(f"context={peer.context}")
        lines.extend(f"{key}={value}" for key, value in peer.extras)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def serialize_extensions_conf(doc: DialplanDoc) -> str:
    blocks = []
    for context, lines in doc.contexts:
        rendered = [f"[{context}]"]
        rendered.extend(
            f"exten => {line.exten},{line.priority},{line.operation}" for line in lines
        )
        blocks.append("\n".join(rendered))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def serialize_voicemail_conf(mailboxes: dict[str, list[MailboxEntry]]) -> str:
    blocks = []
    for context, entries in mailboxes.items():
        rendered = [f"[{context}]"]
        rendered.extend(
            f"{e.mailbox} => {e.password}, {e.display_name}, {e.email}" for e in entries
        )
        blocks.append("\n".join(rendered))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def serialize_pptpd_conf(config: TunnelConfig) -> str:
    return f"localip {config.localip}\nremoteip {config.pool_start}-{config.pool_end}\n"


def serialize_chap_secrets(table: CredentialTable) -> str:
    """Columns are shell-quoted, so a secret may hold ";" or "#".

    Raises:
        ValueError: A column holds a line break
    """
    lines = ["# client\tserver\tsecret\tIP addresses"]
    for entry in table.entries:
        columns = (entry.user, entry.service, entry.secret, entry.address)
        if any("\n" in column or "\r" in column for column in columns):
            raise ValueError(f"chap-secrets row for {entry.user!r} contains a line break")
        lines.append("\t".join(shlex.quote(column) for column in columns))
    return "\n".join(lines) + "\n"
