"""SIP registrar: challenge/response against sip.conf secrets.

Flow for one peer:

    REGISTER (no Authorization)        -> 401 + WWW-Authenticate nonce
    REGISTER (Authorization, good)     -> 200, binding stored
    REGISTER (Authorization, bad)      -> 401 + fresh nonce, auth failure

Nonces are single use and go stale after the registration lifetime; at
most MAX_OUTSTANDING_NONCES unanswered challenges are remembered. Bindings
expire after the configured lifetime and are purged lazily when looked up.
"""

import logging
from collections import OrderedDict, deque
from dataclasses import dataclass

from minipbx.constants import MAX_OUTSTANDING_NONCES, REGISTRATION_EXPIRY
from minipbx.models.conf import PeerEntry
from minipbx.models.enums import EventKind, SipMethod
from minipbx.models.sip import Registration, SipMessage

from .codec import extract_uri
from .digest import NonceIssuer, challenge_header, compute_digest, parse_digest_params
from .messages import make_response

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegisterResult:
    """Registrar answer plus the security-relevant outcome."""

    response: SipMessage
    event: EventKind
    registration: Registration | None = None
    detail: str = ""


class Registrar:
    """Owns registrations and outstanding nonces."""

    def __init__(
        self,
        peers: list[PeerEntry],
        nonces: NonceIssuer | None = None,
        expiry: int = REGISTRATION_EXPIRY,
        history_limit: int | None = None,
    ):
        self.peers = {peer.name: peer for peer in peers}
        self.nonces = nonces or NonceIssuer()
        self.expiry = expiry
        self._bindings: dict[str, Registration] = {}
        self._outstanding: OrderedDict[str, tuple[str, float]] = OrderedDict()
        self.issued: deque[str] = deque(maxlen=history_limit)

    def handle_register(
        self, request: SipMessage, src: str, sport: int, now: float
    ) -> RegisterResult:
        """Answer one REGISTER.

        Args:
            request: The REGISTER request
            src: Address the request came from
            sport: Port the request came from
            now: Virtual time
        """
        if request.method != SipMethod.REGISTER:
            raise ValueError(f"Not a REGISTER: {request.summary()}")

        name = request.uri.user
        peer = self.peers.get(name)
        if peer is None:
            return RegisterResult(
                make_response(request, 404), EventKind.UNKNOWN_USER, detail=f"REGISTER for unknown user {name}"
            )

        authorization = request.header("Authorization")
        if authorization is None:
            return RegisterResult(
                self._challenge(request, name, now), EventKind.REGISTER_ATTEMPT, detail=f"REGISTER challenge for {name}"
            )

        params = parse_digest_params(authorization)
        nonce = params.get("nonce", "")
        issued_for = self._take_nonce(nonce, now)
        expected = compute_digest(peer.auth_user, peer.secret, nonce) if nonce else None
        if (
            issued_for != name
            or params.get("username") != peer.auth_user
            or params.get("response") != expected
        ):
            return RegisterResult(
                self._challenge(request, name, now), EventKind.AUTH_FAILURE, detail=f"bad credentials for {name}"
            )

        host, port = self._contact(request, src, sport)
        expires = request.header("Expires")
        if expires is not None and expires.strip() == "0":
            self._bindings.pop(name, None)
            logger.info("Peer %s unregistered", name)
            return RegisterResult(
                make_response(request, 200), EventKind.REGISTER_SUCCESS, detail=f"{name} unregistered"
            )

        registration = Registration(name, host, port, now + self.expiry)
        self._bindings[name] = registration
        logger.info("Peer %s registered at %s:%d", name, host, port)
        return RegisterResult(
            make_response(request, 200, [("Contact", f"<sip:{name}@{host}:{port}>"), ("Expires", str(self.expiry))]),
            EventKind.REGISTER_SUCCESS,
            registration,
            detail=f"{name} registered",
        )

    def lookup(self, name: str, now: float) -> Registration | None:
        """Live binding of a peer, purging it when expired."""
        registration = self._bindings.get(name)
        if registration is not None and registration.expires_at <= now:
            del self._bindings[name]
            logger.info("Registration of %s expired", name)
            return None
        return registration

    def registrations(self, now: float) -> list[Registration]:
        return [r for name in sorted(self._bindings) if (r := self.lookup(name, now)) is not None]

    def _challenge(self, request: SipMessage, name: str, now: float) -> SipMessage:
        self._expire_nonces(now)
        while len(self._outstanding) >= MAX_OUTSTANDING_NONCES:
            self._outstanding.popitem(last=False)
        nonce = self.nonces.issue()
        self._outstanding[nonce] = (name, now)
        self.issued.append(nonce)
        return make_response(request, 401, [("WWW-Authenticate", challenge_header(nonce))])

    def _take_nonce(self, nonce: str, now: float) -> str | None:
        """Consume a nonce, returning the peer it was issued for unless stale."""
        entry = self._outstanding.pop(nonce, None)
        if entry is None or entry[1] + self.expiry <= now:
            return None
        return entry[0]

    def _expire_nonces(self, now: float) -> None:
        horizon = now - self.expiry
        while self._outstanding:
            oldest = next(iter(self._outstanding))
            if self._outstanding[oldest][1] > horizon:
                break
            del self._outstanding[oldest]

    @property
    def outstanding(self) -> int:
        return len(self._outstanding)

    @staticmethod
    def _contact(request: SipMessage, src: str, sport: int) -> tuple[str, int]:
        contact = request.header("Contact")
        if contact:
            uri = extract_uri(contact)
            return uri.host, uri.port or sport
        return src, sport
