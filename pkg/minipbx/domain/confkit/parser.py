"""Parsers for the five configuration dialects.

- sip.conf: INI sections, one per peer
- extensions.conf: [context] blocks of `exten => E,P,Op(args)` lines
- voicemail.conf: [context] blocks of `box => password, name, email` lines
- pptpd.conf: `localip ADDR` and `remoteip A-B`
- chap-secrets: whitespace separated `user service secret addr` rows

Lines starting with ";" or "#" are comments, and so is a trailing ";" outside
parentheses. chap-secrets only knows "#" comments, so a quoted secret may
hold ";". CR characters are dropped and whitespace around "=", "=>" and ","
is insignificant. Every error names the offending 1-based line.
"""

import ipaddress
import re
import shlex
from collections.abc import Iterator

from minipbx.exceptions import ConfigParseError
from minipbx.models.conf import (
    Credential,
    CredentialTable,
    DialplanDoc,
    ExtenLine,
    MailboxEntry,
    OperationCall,
    PeerEntry,
    TunnelConfig,
)
from minipbx.models.enums import PeerType

_SECTION_RE = re.compile(r"^\[(?P<name>[^\[\]]*)\]$")
_EXTEN_RE = re.compile(r"^exten\s*=>\s*(?P<rest>.*)$", re.IGNORECASE)
_APP_RE = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*(?P<tail>.*)$", re.DOTALL)

_PEER_FIELDS = (
    "type",
    "username",
    "host",
    "secret",
    "dtmfmode",
    "insecure",
    "canreinvite",
    "nat",
    "qualify",
    "mailbox",
    "context",
)


def _strip_comment(line: str) -> str:
    """Drop a trailing ";" comment that sits outside parentheses."""
    depth = 0
    for index, char in enumerate(line):
        if char == "(":
            depth += 1
        elif char == ")":
            depth = max(depth - 1, 0)
        elif char == ";" and depth == 0:
            return line[:index]
    return line


def _logical_lines(text: str, comment_chars: str = ";#") -> Iterator[tuple[int, str]]:
    """Yield (line number, content) for every non-blank, non-comment line."""
    for number, raw in enumerate(text.replace("\r", "").split("\n"), start=1):
        stripped = raw.strip()
        if not stripped or stripped[0] in comment_chars:
            continue
        content = _strip_comment(stripped).strip() if ";" in comment_chars else stripped
        if content:
            yield number, content


def _section_name(line: str, number: int, source: str) -> str | None:
    """Return the header name if the line is a section header."""
    if not line.startswith("["):
        return None
    match = _SECTION_RE.match(line)
    if not match or not match.group("name").strip():
        raise ConfigParseError(source, number, f"Malformed section header: {line}")
    return match.group("name").strip()


def _split_assignment(line: str, number: int, source: str) -> tuple[str, str]:
    """Split `key = value` or `key => value`."""
    key, sep, value = line.partition("=")
    if not sep or not key.strip():
        raise ConfigParseError(source, number, f"Expected key=value, got: {line}")
    if value.startswith(">"):
        value = value[1:]
    return key.strip().lower(), value.strip()


def parse_sip_conf(text: str, source: str = "sip.conf") -> list[PeerEntry]:
    """Parse sip.conf into peers, file order preserved.

    Unknown keys are kept as opaque extras.

    Raises:
        ConfigParseError: Malformed header, duplicate peer, bad value
    """
    sections: list[tuple[str, int, list[tuple[int, str, str]]]] = []
    seen: dict[str, int] = {}

    for number, line in _logical_lines(text):
        name = _section_name(line, number, source)
        if name is not None:
            if name in seen:
                raise ConfigParseError(
                    source, number, f"Duplicate peer '{name}' (first defined at line {seen[name]})"
                )
            seen[name] = number
            sections.append((name, number, []))
            continue
        if not sections:
            raise ConfigParseError(source, number, "Setting outside any [peer] section")
        key, value = _split_assignment(line, number, source)
        sections[-1][2].append((number, key, value))

    return [_build_peer(name, number, items, source) for name, number, items in sections]


def _build_peer(
    name: str, header_line: int, items: list[tuple[int, str, str]], source: str
) -> PeerEntry:
    kwargs: dict = {}
    extras: list[tuple[str, str]] = []
    for number, key, value in items:
        if key == "secret" and value and not value.isdigit():
            raise ConfigParseError(source, number, f"Secret of peer '{name}' must be decimal digits")
        if key == "type":
            try:
                kwargs["type"] = PeerType(value.lower())
            except ValueError:
                raise ConfigParseError(source, number, f"Unknown peer type: {value}") from None
        elif key == "mailbox":
            kwargs["mailbox"] = value or None
            if value and not re.fullmatch(r"\d+@\S+", value):
                raise ConfigParseError(source, number, f"Malformed mailbox reference: {value}")
        elif key in _PEER_FIELDS:
            kwargs[key] = value
        else:
            extras.append((key, value))
    try:
        return PeerEntry(name=name, extras=tuple(extras), **kwargs)
    except ValueError as e:
        raise ConfigParseError(source, header_line, str(e)) from None


def _split_application(text: str, number: int, source: str) -> OperationCall:
    """Split `Name(args)` keeping args verbatim inside the outermost parentheses."""
    match = _APP_RE.match(text.strip())
    if not match:
        raise ConfigParseError(source, number, f"Malformed operation: {text}")
    name, tail = match.group("name"), match.group("tail").strip()
    if not tail:
        return OperationCall(name, "")
    if not tail.startswith("("):
        raise ConfigParseError(source, number, f"Malformed operation: {text}")

    depth = 0
    for index, char in enumerate(tail):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth == 0:
                if tail[index + 1 :].strip():
                    raise ConfigParseError(source, number, f"Text after operation: {text}")
                return OperationCall(name, tail[1:index])
            if depth < 0:
                break
    raise ConfigParseError(source, number, f"Unbalanced parentheses: {text}")


def parse_extensions_conf(text: str, source: str = "extensions.conf") -> DialplanDoc:
    """Parse extensions.conf into a DialplanDoc.

    Raises:
        ConfigParseError: exten before any context, bad priority, unbalanced
            parentheses, duplicate context or unrecognized line
    """
    doc = DialplanDoc()
    seen: set[str] = set()

    for number, line in _logical_lines(text):
        name = _section_name(line, number, source)
        if name is not None:
            if name in seen:
                raise ConfigParseError(source, number, f"Duplicate context '{name}'")
            seen.add(name)
            doc.contexts.append((name, []))
            continue

        match = _EXTEN_RE.match(line)
        if not match:
            raise ConfigParseError(source, number, f"Unrecognized line: {line}")
        if not doc.contexts:
            raise ConfigParseError(source, number, "exten line outside any [context]")

        parts = match.group("rest").split(",", 2)
        if len(parts) != 3:
            raise ConfigParseError(source, number, "Expected exten => E,P,Operation(args)")
        exten, priority_text, application = (part.strip() for part in parts)
        if not exten.isdigit():
            raise ConfigParseError(source, number, f"Extension must be digits: {exten}")
        if not priority_text.isdigit() or int(priority_text) < 1:
            raise ConfigParseError(source, number, f"Priority must be a positive integer: {priority_text}")

        operation = _split_application(application, number, source)
        doc.contexts[-1][1].append(ExtenLine(exten, int(priority_text), operation, number))

    return doc


def parse_voicemail_conf(text: str, source: str = "voicemail.conf") -> dict[str, list[MailboxEntry]]:
    """Parse voicemail.conf into mailboxes grouped by context.

    Fields past the email are accepted and ignored.

    Raises:
        ConfigParseError: Duplicate mailbox, missing field, bad value
    """
    contexts: dict[str, list[MailboxEntry]] = {}
    current: str | None = None

    for number, line in _logical_lines(text):
        name = _section_name(line, number, source)
        if name is not None:
            if name in contexts:
                raise ConfigParseError(source, number, f"Duplicate context '{name}'")
            contexts[name] = []
            current = name
            continue
        if current is None:
            raise ConfigParseError(source, number, "Mailbox outside any [context]")

        box, sep, rest = line.partition("=>")
        if not sep:
            raise ConfigParseError(source, number, "Expected box => password, name, email")
        box = box.strip()
        fields = [field.strip() for field in rest.split(",")]
        if len(fields) < 3:
            missing = ("password", "name", "email")[len(fields)]
            raise ConfigParseError(source, number, f"Mailbox {box}: missing {missing} field")
        if any(entry.mailbox == box for entry in contexts[current]):
            raise ConfigParseError(source, number, f"Duplicate mailbox {box} in context {current}")
        try:
            contexts[current].append(MailboxEntry(box, fields[0], fields[1], fields[2]))
        except ValueError as e:
            raise ConfigParseError(source, number, str(e)) from None

    return contexts


def _parse_pool(value: str, number: int, source: str) -> tuple[str, str]:
    """Parse `A-B` where B is a dotted quad or the last octet only."""
    start_text, sep, end_text = value.partition("-")
    if not sep:
        raise ConfigParseError(source, number, f"remoteip must be a range A-B: {value}")
    try:
        start = ipaddress.IPv4Address(start_text.strip())
        end_text = end_text.strip()
        if end_text.isdigit():
            prefix = str(start).rsplit(".", 1)[0]
            end_text = f"{prefix}.{end_text}"
        end = ipaddress.IPv4Address(end_text)
    except ValueError as e:
        raise ConfigParseError(source, number, f"Invalid remoteip range: {e}") from None
    if end < start:
        raise ConfigParseError(source, number, f"Empty remote pool: {value}")
    return str(start), str(end)


def parse_pptpd_conf(text: str, source: str = "pptpd.conf") -> TunnelConfig:
    """Parse pptpd.conf; directives other than localip/remoteip are ignored.

    Raises:
        ConfigParseError: Missing directive, empty pool, localip inside pool
    """
    localip: tuple[int, str] | None = None
    remote: tuple[int, str, str] | None = None
    last_line = 1

    for number, line in _logical_lines(text):
        last_line = number
        key, _, value = line.partition(" ")
        key, value = key.strip().lower(), value.strip()
        if key == "localip":
            try:
                localip = (number, str(ipaddress.IPv4Address(value)))
            except ValueError:
                raise ConfigParseError(source, number, f"Invalid localip: {value}") from None
        elif key == "remoteip":
            remote = (number, *_parse_pool(value, number, source))

    if localip is None:
        raise ConfigParseError(source, last_line, "Missing localip directive")
    if remote is None:
        raise ConfigParseError(source, last_line, "Missing remoteip directive")
    try:
        return TunnelConfig(localip[1], remote[1], remote[2])
    except ValueError as e:
        raise ConfigParseError(source, max(localip[0], remote[0]), str(e)) from None


def parse_chap_secrets(text: str, source: str = "chap-secrets") -> CredentialTable:
    """Parse chap-secrets rows: user service secret [addr].

    Raises:
        ConfigParseError: Short row or duplicate user
    """
    table = CredentialTable()
    for number, line in _logical_lines(text, comment_chars="#"):
        try:
            columns = shlex.split(line, comments=True)
        except ValueError as e:
            raise ConfigParseError(source, number, f"Unbalanced quotes: {e}") from None
        if len(columns) < 3:
            raise ConfigParseError(source, number, "Expected: user service secret [address]")
        user, service, secret = columns[:3]
        address = columns[3] if len(columns) > 3 else "*"
        if table.lookup(user) is not None:
            raise ConfigParseError(source, number, f"Duplicate user '{user}'")
        table.entries.append(Credential(user, secret, service, address))
    return table


def parse_vpn_config(
    pptpd_text: str,
    chap_text: str,
    pptpd_source: str = "pptpd.conf",
    chap_source: str = "chap-secrets",
) -> tuple[TunnelConfig, CredentialTable]:
    """Parse the tunnel configuration pair."""
    return parse_pptpd_conf(pptpd_text, pptpd_source), parse_chap_secrets(chap_text, chap_source)
