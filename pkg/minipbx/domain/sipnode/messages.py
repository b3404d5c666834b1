"""Builders for the requests and responses exchanged in a dialogue."""

from minipbx.models.enums import SipMethod
from minipbx.models.sip import SipMessage, SipUri, canonical_header

# Headers a response echoes from its request, by canonical name
_DIALOG_HEADERS = ("via", "from", "to", "call-id", "cseq")


def make_response(
    request: SipMessage,
    code: int,
    extra_headers: list[tuple[str, str]] | None = None,
    body: bytes = b"",
) -> SipMessage:
    """Status answering `request`, dialogue headers copied in order.

    Compact forms (v, f, t, i) count as their long names.
    """
    headers = [(n, v) for n, v in request.headers if canonical_header(n) in _DIALOG_HEADERS]
    headers.extend(extra_headers or [])
    return SipMessage.status(code, headers, body)


def make_request(
    method: SipMethod,
    uri: SipUri,
    *,
    from_uri: SipUri,
    to_uri: SipUri,
    call_id: str,
    cseq: int,
    via: str,
    contact: SipUri | None = None,
    extra_headers: list[tuple[str, str]] | None = None,
    body: bytes = b"",
    content_type: str | None = None,
) -> SipMessage:
    headers = [
        ("Via", f"SIP/2.0/UDP {via}"),
        ("From", f"<{from_uri}>"),
        ("To", f"<{to_uri}>"),
        ("Call-ID", call_id),
        ("CSeq", f"{cseq} {method.value}"),
    ]
    if contact is not None:
        headers.append(("Contact", f"<{contact}>"))
    headers.extend(extra_headers or [])
    if content_type is not None:
        headers.append(("Content-Type", content_type))
    if body or content_type is not None:
        headers.append(("Content-Length", str(len(body))))
    return SipMessage.request(method, uri, headers, body)


def cseq_method(message: SipMessage) -> SipMethod | None:
    """Method named in the CSeq header, used to match responses to requests."""
    value = message.header("CSeq")
    if not value or " " not in value:
        return None
    try:
        return SipMethod(value.split()[-1])
    except ValueError:
        return None
