"""SIP codec, digest authentication, registrar and call sessions."""

from minipbx.domain.sipnode.codec import decode, encode, extract_uri, parse_uri
from minipbx.domain.sipnode.digest import (
    NonceIssuer,
    challenge_header,
    compute_digest,
    credentials_header,
    parse_digest_params,
)
from minipbx.domain.sipnode.messages import cseq_method, make_request, make_response
from minipbx.domain.sipnode.registrar import Registrar, RegisterResult
from minipbx.domain.sipnode.session import TRANSITIONS, can_apply, session_event

__all__ = [
    "NonceIssuer",
    "RegisterResult",
    "Registrar",
    "TRANSITIONS",
    "can_apply",
    "challenge_header",
    "compute_digest",
    "credentials_header",
    "cseq_method",
    "decode",
    "encode",
    "extract_uri",
    "make_request",
    "make_response",
    "parse_digest_params",
    "parse_uri",
    "session_event",
]
