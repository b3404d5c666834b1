"""SIP text codec.

Wire form: start line, `Name: value` header lines, blank line, body, all
CRLF separated. encode emits exactly the message's headers in order, so
decode(encode(m)) == m.
"""

import re

from minipbx.constants import SIP_VERSION
from minipbx.exceptions import SipCodecError
from minipbx.models.enums import SipMethod
from minipbx.models.sip import STATUS_REASONS, SipMessage, SipUri

CRLF = b"\r\n"

_URI_RE = re.compile(r"^sip:(?P<user>[^@:;\s]+)@(?P<host>[^:;\s>]+)(?::(?P<port>\d+))?$")
_HEADER_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9\-_.!%*+`'~]*$")


def parse_uri(text: str) -> SipUri:
    """Parse sip:user@host[:port].

    Raises:
        SipCodecError: If the URI is malformed
    """
    match = _URI_RE.match(text.strip())
    if not match:
        raise SipCodecError(f"Malformed URI: {text!r}")
    port = match.group("port")
    if port is not None and not 0 < int(port) < 65536:
        raise SipCodecError(f"URI port out of range: {text!r}")
    return SipUri(match.group("user"), match.group("host"), int(port) if port else None)


def extract_uri(value: str) -> SipUri:
    """URI inside a From/To/Contact value such as `"Harish" <sip:harish@h>;tag=1`."""
    start, end = value.find("<"), value.find(">")
    if start != -1 and end > start:
        return parse_uri(value[start + 1 : end])
    return parse_uri(value.split(";", 1)[0])


def encode(message: SipMessage) -> bytes:
    """Render a message to octets. Byte-deterministic."""
    if message.is_request:
        start = f"{message.method.value} {message.uri} {SIP_VERSION}"
    else:
        start = f"{SIP_VERSION} {message.code} {message.reason}"
    lines = [start]
    for name, value in message.headers:
        if "\r" in value or "\n" in value:
            raise SipCodecError(f"Header {name} contains a line break")
        lines.append(f"{name}: {value}")
    head = "\r\n".join(lines).encode("utf-8")
    return head + CRLF + CRLF + message.body


def decode(data: bytes) -> SipMessage:
    """Parse octets into a message.

    Raises:
        SipCodecError: Missing blank line, unknown method or status code,
            malformed start line, header or URI
    """
    head, sep, body = data.partition(CRLF + CRLF)
    if not sep:
        raise SipCodecError("Missing blank line after headers")
    try:
        text = head.decode("utf-8")
    except UnicodeDecodeError as e:
        raise SipCodecError(f"Header block is not UTF-8: {e}") from None

    start, *header_lines = text.split("\r\n")
    headers = tuple(_parse_header(line) for line in header_lines)

    length = next((v for n, v in headers if n.lower() in ("content-length", "l")), None)
    if length is not None:
        if not length.isdigit() or int(length) != len(body):
            raise SipCodecError(f"Content-Length {length} does not match body of {len(body)} octets")

    try:
        if start.startswith(SIP_VERSION + " "):
            return _decode_status(start, headers, body)
        return _decode_request(start, headers, body)
    except ValueError as e:
        raise SipCodecError(str(e)) from None


def _parse_header(line: str) -> tuple[str, str]:
    name, sep, value = line.partition(":")
    name = name.strip()
    if not sep or not _HEADER_NAME_RE.match(name):
        raise SipCodecError(f"Malformed header line: {line!r}")
    return name, value.strip()


def _decode_status(start: str, headers, body: bytes) -> SipMessage:
    parts = start.split(" ", 2)
    if len(parts) < 2 or not parts[1].isdigit():
        raise SipCodecError(f"Malformed status line: {start!r}")
    code = int(parts[1])
    if code not in STATUS_REASONS:
        raise SipCodecError(f"Unknown status code: {code}")
    reason = parts[2] if len(parts) == 3 else STATUS_REASONS[code]
    return SipMessage(code=code, reason=reason, headers=headers, body=body)


def _decode_request(start: str, headers, body: bytes) -> SipMessage:
    parts = start.split(" ")
    if len(parts) != 3 or parts[2] != SIP_VERSION:
        raise SipCodecError(f"Malformed request line: {start!r}")
    try:
        method = SipMethod(parts[0])
    except ValueError:
        raise SipCodecError(f"Unknown method: {parts[0]}") from None
    return SipMessage(method=method, uri=parse_uri(parts[1]), headers=headers, body=body)
