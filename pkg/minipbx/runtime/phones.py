"""Scripted softphones driven by scenario steps.

A phone speaks the same SIP subset as the server: it answers a 401 with
one digest retry, auto-rings on an incoming INVITE and sends DTMF as
telephone-event RTP frames. Once a tunnel is up every datagram it sends
travels sealed inside udp/1723.
"""

import itertools
import logging
import random
from dataclasses import dataclass

from minipbx.constants import (
    DTMF_CONTENT_TYPE,
    FRAME_INTERVAL,
    PPTP_PORT,
    TELEPHONE_EVENT_PAYLOAD_TYPE,
)
from minipbx.domain.media import SsrcAllocator, encode_frame, next_frame
from minipbx.domain.sipnode import (
    compute_digest,
    credentials_header,
    cseq_method,
    decode,
    encode,
    make_request,
    make_response,
    parse_digest_params,
)
from minipbx.domain.tunnel import TunnelSession, pack_inner, unpack_inner
from minipbx.exceptions import SipCodecError, TunnelIntegrityError
from minipbx.models.enums import Proto, SipMethod
from minipbx.models.media import MediaSession
from minipbx.models.sip import SipMessage, SipUri

from .clock import VirtualClock
from .network import Network
from .switchboard import sdp_body, sdp_port

logger = logging.getLogger(__name__)

# One GSM 06.10 frame is 33 octets
GSM_FRAME = bytes(33)


@dataclass
class PhoneCall:
    call_id: str
    outgoing: bool
    state: str = "calling"
    invite: SipMessage | None = None
    remote_rtp: int | None = None


class Phone:
    """One peer's softphone."""

    def __init__(
        self,
        name: str,
        address: str,
        port: int,
        network: Network,
        clock: VirtualClock,
        server_address: str,
        sip_port: int = 5060,
        secret: str = "",
        auth_user: str | None = None,
        vpn_user: str | None = None,
        vpn_password: str | None = None,
        rng: random.Random | None = None,
    ):
        self.name = name
        self.address = address
        self.port = port
        self.network = network
        self.clock = clock
        self.server_address = server_address
        self.sip_port = sip_port
        self.secret = secret
        self.auth_user = auth_user or name
        self.vpn_user = vpn_user
        self.vpn_password = vpn_password
        self.rtp_port = port + 2
        self.ssrcs = SsrcAllocator(rng or random.Random(0))
        self.tunnel: TunnelSession | None = None
        self.registered = False
        self.call: PhoneCall | None = None
        self.received: list[str] = []
        self.media_received = 0
        self._cseq = itertools.count(1)
        self._calls = itertools.count(1)
        self._pending_secret: str | None = None
        self._media: MediaSession | None = None
        self._dtmf: MediaSession | None = None

    @property
    def source(self) -> str:
        """Address the server sees: the leased address once tunneled."""
        return self.tunnel.leased_addr if self.tunnel else self.address

    # scenario verbs

    def register(self, secret: str | None = None) -> None:
        self._pending_secret = self.secret if secret is None else secret
        self._send_sip(self._request(SipMethod.REGISTER, self.name, f"reg-{self.name}@{self.address}"))

    def call_exten(self, exten: str, dtmf: str | None = None) -> str:
        call_id = f"{self.name}-{next(self._calls)}@{self.address}"
        if dtmf:
            body, content_type = dtmf.encode("ascii"), DTMF_CONTENT_TYPE
        else:
            body, content_type = sdp_body(self.rtp_port), "application/sdp"
        invite = self._request(SipMethod.INVITE, exten, call_id, body=body, content_type=content_type)
        self.call = PhoneCall(call_id, outgoing=True, invite=invite)
        self._send_sip(invite)
        return call_id

    def answer(self) -> None:
        call = self.call
        if call is None or call.outgoing or call.state != "ringing":
            logger.warning("%s has no ringing call to answer", self.name)
            return
        call.state = "up"
        response = make_response(
            call.invite,
            200,
            [("Contact", f"<{SipUri(self.name, self.source, self.port)}>"), ("Content-Type", "application/sdp")],
            body=sdp_body(self.rtp_port),
        )
        self._send_sip(response)

    def bye(self) -> None:
        call = self.call
        if call is None or call.state != "up":
            logger.warning("%s has no call to hang up", self.name)
            return
        call.state = "ended"
        self._send_sip(self._request(SipMethod.BYE, self.name, call.call_id))

    def dtmf(self, digits: str) -> None:
        port = self._media_target()
        if port is None:
            return
        if self._dtmf is None:
            self._dtmf = self.ssrcs.open_session(TELEPHONE_EVENT_PAYLOAD_TYPE)
        for digit in digits:
            frame, self._dtmf = next_frame(self._dtmf, digit.encode("ascii"))
            self._send(Proto.UDP, port, encode_frame(frame), self.rtp_port)

    def media(self, frames: int) -> None:
        """Send GSM frames at the 20 ms frame interval."""
        port = self._media_target()
        if port is None:
            return
        if self._media is None:
            self._media = self.ssrcs.open_session()
        for n in range(frames):
            self.clock.call_later(n * FRAME_INTERVAL, lambda: self._send_frame(port))

    def vpn(self) -> None:
        if not self.vpn_user:
            logger.warning("%s has no tunnel credentials", self.name)
            return
        login = f"LOGIN {self.vpn_user} {self.vpn_password}".encode("ascii")
        self.network.to_server(self.address, Proto.TCP, PPTP_PORT, login, sport=self.port)

    # network endpoint

    def deliver(self, proto: Proto, sport: int, dport: int, payload: bytes) -> None:
        if proto == Proto.TCP and sport == PPTP_PORT:
            self._on_tunnel_reply(payload.decode("ascii", errors="replace"))
        elif sport == self.sip_port:
            self._on_sip(payload)
        else:
            self.media_received += 1

    def deliver_sealed(self, frame: bytes) -> None:
        if self.tunnel is None:
            return
        try:
            proto, sport, dport, payload = unpack_inner(self.tunnel.open(frame))
        except TunnelIntegrityError as e:
            logger.warning("%s dropped a sealed frame: %s", self.name, e)
            return
        self.deliver(proto, sport, dport, payload)

    # internals

    def _on_tunnel_reply(self, reply: str) -> None:
        self.received.append(f"tunnel {reply}")
        verb, _, rest = reply.partition(" ")
        if verb != "OK":
            logger.info("%s tunnel login answered %s", self.name, reply)
            return
        self.tunnel = TunnelSession.keyed(
            self.vpn_user, self.vpn_password, rest.strip(), self.clock.now, outer=self.address
        )
        logger.info("%s tunneled as %s", self.name, self.tunnel.leased_addr)

    def _on_sip(self, payload: bytes) -> None:
        try:
            message = decode(payload)
        except SipCodecError as e:
            logger.warning("%s got an undecodable message: %s", self.name, e)
            return
        self.received.append(message.summary())
        if message.is_request:
            self._on_request(message)
            return

        method = cseq_method(message)
        if method == SipMethod.REGISTER:
            self._on_register_response(message)
        elif method == SipMethod.INVITE and self.call is not None and message.call_id == self.call.call_id:
            self._on_invite_response(message)

    def _on_register_response(self, message: SipMessage) -> None:
        if message.code == 200:
            self.registered = True
            self._pending_secret = None
        elif message.code == 401 and self._pending_secret is not None:
            nonce = parse_digest_params(message.header("WWW-Authenticate") or "").get("nonce", "")
            response = compute_digest(self.auth_user, self._pending_secret, nonce)
            self._pending_secret = None
            request = self._request(
                SipMethod.REGISTER,
                self.name,
                f"reg-{self.name}@{self.address}",
                extra_headers=[("Authorization", credentials_header(self.auth_user, nonce, response))],
            )
            self._send_sip(request)
        else:
            self.registered = False

    def _on_invite_response(self, message: SipMessage) -> None:
        call = self.call
        if message.code == 180:
            call.state = "ringing"
        elif message.code == 200:
            call.state = "up"
            call.remote_rtp = sdp_port(message.body)
            self._send_sip(self._request(SipMethod.ACK, self.name, call.call_id))
        elif message.code >= 300:
            call.state = "ended"

    def _on_request(self, message: SipMessage) -> None:
        method = message.method
        if method == SipMethod.INVITE:
            self.call = PhoneCall(message.call_id, outgoing=False, state="ringing", invite=message)
            self._send_sip(make_response(message, 180))
        elif method == SipMethod.ACK:
            if self.call is not None and self.call.call_id == message.call_id:
                self.call.remote_rtp = sdp_port(message.body)
        elif method in (SipMethod.BYE, SipMethod.CANCEL):
            self._send_sip(make_response(message, 200))
            if self.call is not None and self.call.call_id == message.call_id:
                self.call.state = "ended"
        else:
            self._send_sip(make_response(message, 200))

    def _request(
        self,
        method: SipMethod,
        user: str,
        call_id: str,
        body: bytes = b"",
        content_type: str | None = None,
        extra_headers: list[tuple[str, str]] | None = None,
    ) -> SipMessage:
        server = self.server_address
        return make_request(
            method,
            SipUri(user, server, self.sip_port),
            from_uri=SipUri(self.name, server),
            to_uri=SipUri(user, server),
            call_id=call_id,
            cseq=next(self._cseq),
            via=f"{self.source}:{self.port}",
            contact=SipUri(self.name, self.source, self.port),
            extra_headers=extra_headers,
            body=body,
            content_type=content_type,
        )

    def _media_target(self) -> int | None:
        if self.call is None or self.call.state != "up" or self.call.remote_rtp is None:
            logger.warning("%s has no media path", self.name)
            return None
        return self.call.remote_rtp

    def _send_frame(self, port: int) -> None:
        frame, self._media = next_frame(self._media, GSM_FRAME)
        self._send(Proto.UDP, port, encode_frame(frame), self.rtp_port)

    def _send_sip(self, message: SipMessage) -> None:
        self._send(Proto.UDP, self.sip_port, encode(message), self.port)

    def _send(self, proto: Proto, dport: int, payload: bytes, sport: int) -> None:
        if self.tunnel is not None:
            frame = self.tunnel.seal(pack_inner(proto, sport, dport, payload))
            self.network.to_server(self.address, Proto.UDP, PPTP_PORT, frame, sport=PPTP_PORT)
        else:
            self.network.to_server(self.address, proto, dport, payload, sport=sport)
