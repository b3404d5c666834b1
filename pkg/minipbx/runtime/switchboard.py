"""The SIP server: registrar front end and call channels.

A channel is one inbound INVITE. It runs the dial plan for the caller's
context and may hand control to the attendance IVR (MYSQL with an "ivr"
template), the voicemail menu (VoiceMailMain) or a bridged call (Dial).
The first audible action answers the caller.
"""

import logging
import re
from collections import deque
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

from minipbx.constants import (
    DTMF_CONTENT_TYPE,
    READ_TERMINATOR,
    TELEPHONE_EVENT_PAYLOAD_TYPE,
)
from minipbx.domain.acl import StoreGateway
from minipbx.domain.dialplan import Action, Completion, DigitsInput, Dialplan, ExecState, start, step
from minipbx.domain.ivrvm import (
    AttendanceIvr,
    IvrSession,
    IvrStart,
    MailboxStore,
    MenuSession,
    VoicemailMenu,
    deposit_voicemail,
    lookup_completion,
)
from minipbx.domain.media import decode_frame
from minipbx.domain.notify import NotificationSink
from minipbx.domain.pktfilter import PacketFilter
from minipbx.domain.sipnode import (
    Registrar,
    can_apply,
    cseq_method,
    decode,
    encode,
    extract_uri,
    make_request,
    make_response,
    session_event,
)
from minipbx.exceptions import (
    DialplanRuntimeError,
    MailboxNotFoundError,
    RtpCodecError,
    SipCodecError,
)
from minipbx.models.acl import Principal
from minipbx.models.conf import PeerEntry
from minipbx.models.config import Settings
from minipbx.models.enums import (
    ActionKind,
    CallEvent,
    CallState,
    EventKind,
    Proto,
    ServiceState,
    SipMethod,
    Verdict,
)
from minipbx.models.packet import FilterRule, Packet
from minipbx.models.security import SecurityEvent
from minipbx.models.sip import CallSession, SipMessage, SipUri

from .clock import Timer, VirtualClock
from .metrics import RunMetrics
from .network import Network
from .pipeline import Pipeline

logger = logging.getLogger(__name__)

_SUSPEND = object()
_SDP_PORT_RE = re.compile(rb"m=audio (\d+)")

Reporter = Callable[[SecurityEvent], object]


class Mode(Enum):
    PLAN = "plan"
    IVR = "ivr"
    MENU = "menu"
    BRIDGED = "bridged"


@dataclass
class DialLeg:
    session: CallSession
    host: str
    port: int
    invite: SipMessage
    timer: Timer | None = None


@dataclass
class Channel:
    call_id: str
    caller: str
    src: str
    sport: int
    invite: SipMessage
    exec: ExecState
    mode: Mode = Mode.PLAN
    answered: bool = False
    ended: bool = False
    buffer: str = ""
    reading: bool = False
    read_timeout: float = 5.0
    read_timer: Timer | None = None
    ivr: IvrSession | None = None
    menu: MenuSession | None = None
    leg: DialLeg | None = None
    rtp_port: int | None = None
    rtp_rules: list[FilterRule] = field(default_factory=list)
    media_last: dict[int, int] = field(default_factory=dict)
    media_gaps: int = 0
    transcript: list[str] = field(default_factory=list)


def sdp_body(port: int) -> bytes:
    return f"m=audio {port} RTP/AVP 3 {TELEPHONE_EVENT_PAYLOAD_TYPE}\r\n".encode("ascii")


def sdp_port(body: bytes) -> int | None:
    match = _SDP_PORT_RE.search(body)
    return int(match.group(1)) if match else None


class Switchboard:
    """Owns registrations, channels and call sessions."""

    def __init__(
        self,
        settings: Settings,
        peers: list[PeerEntry],
        plan: Dialplan,
        registrar: Registrar,
        gateway: StoreGateway,
        mailboxes: MailboxStore,
        notifier: NotificationSink,
        packet_filter: PacketFilter,
        pipeline: Pipeline,
        network: Network,
        clock: VirtualClock,
        metrics: RunMetrics,
        report: Reporter,
        history_limit: int | None = None,
    ):
        self.settings = settings
        self.peers = {peer.name: peer for peer in peers}
        self.plan = plan
        self.registrar = registrar
        self.gateway = gateway
        self.mailboxes = mailboxes
        self.notifier = notifier
        self.packet_filter = packet_filter
        self.pipeline = pipeline
        self.network = network
        self.clock = clock
        self.metrics = metrics
        self.report = report
        self.principal = Principal.parse(settings.ivr_principal)
        self.ivr = AttendanceIvr(gateway, self.principal, settings.retry_cap, settings.read_timeout)
        self.menu = VoicemailMenu(mailboxes, settings.read_timeout)
        self.state = ServiceState.STOPPED
        self.channels: dict[str, Channel] = {}
        self.legs: dict[str, Channel] = {}
        # live dial legs; a finished leg is dropped once metrics have counted it
        self.sessions: dict[str, CallSession] = {}
        self.history: deque[Channel] = deque(maxlen=history_limit)
        self._by_port: dict[int, Channel] = {}
        self._cseq = 0
        self._legs_opened = 0

    # lifecycle

    def start(self) -> None:
        self.state = ServiceState.RUNNING
        logger.info(
            "SIP service up on %s:%d (IVR retries capped at %d)",
            self.settings.server_address,
            self.settings.sip_port,
            self.settings.retry_cap,
        )

    def stop(self) -> None:
        for channel in list(self.channels.values()):
            self._hangup(channel)
        self.state = ServiceState.STOPPED
        logger.info("SIP service down")

    # inbound

    def receive_sip(self, packet: Packet) -> None:
        if self.state is not ServiceState.RUNNING:
            logger.debug("SIP service stopped, ignoring %s", packet.src)
            return
        try:
            message = decode(packet.payload)
        except SipCodecError as e:
            self.report(SecurityEvent(EventKind.MALFORMED_PACKET, packet.src, self.clock.now, str(e)))
            return
        if message.is_request:
            self._on_request(message, packet)
        else:
            self._on_response(message)

    def receive_media(self, packet: Packet) -> None:
        channel = self._by_port.get(packet.dport)
        if channel is None or channel.ended:
            return
        try:
            frame = decode_frame(packet.payload)
        except RtpCodecError as e:
            self.report(SecurityEvent(EventKind.MALFORMED_PACKET, packet.src, self.clock.now, str(e)))
            return

        if frame.payload_type == TELEPHONE_EVENT_PAYLOAD_TYPE:
            self._on_digits(channel, frame.payload.decode("ascii", errors="ignore"))
            return

        self.metrics.media_frames += 1
        last = channel.media_last.get(frame.ssrc)
        if last is not None and frame.seq != (last + 1) % (1 << 16):
            channel.media_gaps += 1
            logger.debug("RTP gap on %s: %d after %d", channel.call_id, frame.seq, last)
        channel.media_last[frame.ssrc] = frame.seq

        if channel.mode is Mode.BRIDGED and channel.leg is not None:
            if packet.src == channel.src:
                target = channel.leg.host
            else:
                target = channel.src
            self.network.to_client(target, 0, packet.payload, sport=channel.rtp_port)

    def _on_request(self, message: SipMessage, packet: Packet) -> None:
        method = message.method
        if method == SipMethod.REGISTER:
            self._on_register(message, packet)
        elif method == SipMethod.INVITE:
            self._on_invite(message, packet)
        elif method == SipMethod.BYE:
            self._on_bye(message, packet)
        elif method == SipMethod.CANCEL:
            self._on_cancel(message, packet)
        elif method == SipMethod.ACK:
            return
        else:
            self._reply(packet, make_response(message, 200))

    def _on_register(self, message: SipMessage, packet: Packet) -> None:
        result = self.registrar.handle_register(message, packet.src, packet.sport, self.clock.now)
        self._reply(packet, result.response)
        if result.event == EventKind.REGISTER_SUCCESS:
            self.metrics.registrations_ok += 1
        elif result.event in (EventKind.AUTH_FAILURE, EventKind.UNKNOWN_USER):
            self.metrics.registrations_failed += 1
        self.report(SecurityEvent(result.event, packet.src, self.clock.now, result.detail))

    def _on_invite(self, message: SipMessage, packet: Packet) -> None:
        call_id = message.call_id or ""
        if call_id in self.channels:
            return
        try:
            caller = extract_uri(message.header("From") or "").user
        except SipCodecError:
            self._reply(packet, make_response(message, 403))
            return

        registration = self.registrar.lookup(caller, self.clock.now)
        if registration is not None and registration.contact_host == packet.src:
            context = self.peers[caller].context
        elif self.settings.guest_context:
            context = self.settings.guest_context
        else:
            self._reply(packet, make_response(message, 403))
            self.report(
                SecurityEvent(EventKind.UNKNOWN_USER, packet.src, self.clock.now, f"INVITE from unregistered {caller}")
            )
            return

        exten = message.uri.user
        if not self.plan.has(context, exten):
            self._reply(packet, make_response(message, 404))
            return

        self._reply(packet, make_response(message, 100))
        state = start(
            self.plan,
            context,
            exten,
            budget=self.settings.step_budget,
            read_timeout=self.settings.read_timeout,
            dial_timeout=self.settings.dial_timeout,
            session=call_id,
            variables={"CALLERID": caller},
        )
        channel = Channel(call_id, caller, packet.src, packet.sport, message, state)
        if (message.header("Content-Type") or "").lower() == DTMF_CONTENT_TYPE:
            channel.buffer = message.body.decode("ascii", errors="ignore")
        self.channels[call_id] = channel
        self.history.append(channel)
        logger.info("call %s from %s to %s in [%s]", call_id, caller, exten, context)
        self._drive(channel)

    def _on_bye(self, message: SipMessage, packet: Packet) -> None:
        call_id = message.call_id or ""
        channel = self.channels.get(call_id)
        from_caller = channel is not None
        if channel is None:
            channel = self.legs.get(call_id)
        if channel is None:
            self._reply(packet, make_response(message, 481))
            return
        self._reply(packet, make_response(message, 200))

        leg = channel.leg
        if leg is not None and leg.session.state == CallState.ACTIVE:
            self._set_session(channel, CallEvent.BYE)
            self.metrics.calls_completed += 1
            if from_caller:
                self._send_request(SipMethod.BYE, leg.host, leg.port, leg.session.id, channel.caller, leg.session.callee)
            else:
                self._bye_caller(channel)
        elif leg is not None and from_caller:
            self._cancel_leg(channel)
        self._close(channel)

    def _on_cancel(self, message: SipMessage, packet: Packet) -> None:
        channel = self.channels.get(message.call_id or "")
        if channel is None or channel.answered:
            self._reply(packet, make_response(message, 481))
            return
        self._reply(packet, make_response(message, 200))
        if channel.leg is not None:
            self._cancel_leg(channel)
        self._close(channel)

    def _on_response(self, message: SipMessage) -> None:
        channel = self.legs.get(message.call_id or "")
        if channel is None or channel.ended or channel.leg is None:
            return
        if cseq_method(message) != SipMethod.INVITE:
            return
        leg = channel.leg
        code = message.code

        if code == 180 and can_apply(leg.session, CallEvent.RING):
            self._set_session(channel, CallEvent.RING)
            self._reply_caller(channel, make_response(channel.invite, 180))
        elif code == 200 and leg.session.state in (CallState.INVITING, CallState.RINGING):
            if leg.session.state == CallState.INVITING:
                self._set_session(channel, CallEvent.RING)
            self._set_session(channel, CallEvent.ANSWER)
            if leg.timer is not None:
                leg.timer.cancel()
            self._answer(channel)
            self._open_media_for(channel, leg.host)
            self._send_request(
                SipMethod.ACK,
                leg.host,
                leg.port,
                leg.session.id,
                channel.caller,
                leg.session.callee,
                body=sdp_body(channel.rtp_port),
                content_type="application/sdp",
            )
            channel.mode = Mode.BRIDGED
            logger.info("call %s answered by %s", leg.session.id, leg.session.callee)
        elif code >= 300:
            if leg.timer is not None:
                leg.timer.cancel()
            self.legs.pop(leg.session.id, None)
            self.sessions.pop(leg.session.id, None)
            channel.leg = None
            self._drive(channel, Completion("busy"))

    def _on_digits(self, channel: Channel, digits: str) -> None:
        channel.buffer += digits
        if not channel.reading:
            return
        ready = self._take_digits(channel)
        if ready is None:
            self._arm_read_timer(channel)
            return
        self._stop_reading(channel)
        self._drive(channel, DigitsInput(ready))

    # channel execution

    def _drive(self, channel: Channel, input=None) -> None:
        while not channel.ended:
            if channel.mode is Mode.BRIDGED:
                return
            if channel.mode is Mode.IVR and input is None:
                return
            try:
                actions, carry = self._next_actions(channel, input)
            except (DialplanRuntimeError, ValueError) as e:
                logger.warning("call %s: %s", channel.call_id, e)
                self._hangup(channel)
                return
            input = carry
            for action in actions:
                result = self._perform(channel, action)
                if channel.ended or result is _SUSPEND:
                    return
                if result is not None:
                    input = result

    def _next_actions(self, channel: Channel, input) -> tuple[list[Action], object]:
        now = self.clock.now
        if channel.mode is Mode.IVR:
            actions, channel.ivr = self.ivr.run(channel.ivr, input, now)
            return actions, None

        if channel.mode is Mode.MENU:
            try:
                if input is None:
                    actions, channel.menu = self.menu.start(channel.menu)
                else:
                    actions, channel.menu = self.menu.enter(channel.menu, input, now)
            except MailboxNotFoundError as e:
                logger.warning("call %s: %s", channel.call_id, e)
                return [Action(ActionKind.HANGUP)], None
            if channel.menu.done:
                status = channel.menu.status
                channel.mode, channel.menu = Mode.PLAN, None
                return actions, Completion(status)
            return actions, None

        action, channel.exec = step(self.plan, channel.exec, input)
        return [action], None

    def _perform(self, channel: Channel, action: Action):
        kind = action.kind
        if kind in (ActionKind.PLAY, ActionKind.SAY_DIGITS):
            self._answer(channel)
            channel.transcript.append(str(action))
            return None
        if kind is ActionKind.GOTO:
            return None
        if kind is ActionKind.HANGUP:
            self._hangup(channel)
            return None
        if kind is ActionKind.READ:
            self._answer(channel)
            if action.prompt:
                channel.transcript.append(f"{ActionKind.PLAY.value}({action.prompt})")
            channel.transcript.append(str(action))
            return self._await_digits(channel, action.timeout or self.settings.read_timeout)
        if kind is ActionKind.DIAL:
            return self._dial(channel, action)
        if kind is ActionKind.QUERY:
            return self._query(channel, action)
        if kind is ActionKind.VOICEMAIL:
            self._answer(channel)
            channel.mode = Mode.MENU
            channel.menu = MenuSession(action.arg, channel.src)
            return None
        raise ValueError(f"Unhandled action {action}")

    def _await_digits(self, channel: Channel, timeout: float):
        channel.reading = True
        channel.read_timeout = timeout
        ready = self._take_digits(channel)
        if ready is not None:
            channel.reading = False
            return DigitsInput(ready)
        self._arm_read_timer(channel)
        return _SUSPEND

    @staticmethod
    def _take_digits(channel: Channel) -> str | None:
        if READ_TERMINATOR not in channel.buffer:
            return None
        value, _, rest = channel.buffer.partition(READ_TERMINATOR)
        channel.buffer = rest
        return value + READ_TERMINATOR

    def _arm_read_timer(self, channel: Channel) -> None:
        if channel.read_timer is not None:
            channel.read_timer.cancel()
        channel.read_timer = self.clock.call_later(channel.read_timeout, lambda: self._read_expired(channel))

    def _stop_reading(self, channel: Channel) -> None:
        channel.reading = False
        if channel.read_timer is not None:
            channel.read_timer.cancel()
            channel.read_timer = None

    def _read_expired(self, channel: Channel) -> None:
        if channel.ended or not channel.reading:
            return
        value, channel.buffer = channel.buffer, ""
        channel.reading = False
        channel.read_timer = None
        self._drive(channel, DigitsInput(value, timed_out=True))

    def _query(self, channel: Channel, action: Action):
        now = self.clock.now
        if channel.mode is Mode.IVR:
            return self.ivr.fetch(channel.ivr, now)
        mode = self.settings.query_templates.get(action.arg)
        if mode == "ivr":
            self._answer(channel)
            channel.mode = Mode.IVR
            channel.ivr = IvrSession(src=channel.src)
            return IvrStart()
        if mode == "lookup":
            return lookup_completion(self.gateway, self.principal, channel.exec.variable("ID"), channel.src, now)
        logger.warning("call %s: unknown query template %r", channel.call_id, action.arg)
        return Completion("error")

    def _dial(self, channel: Channel, action: Action):
        peer = action.dial_peer
        registration = self.registrar.lookup(peer, self.clock.now)
        if registration is None:
            logger.info("call %s: %s is not registered", channel.call_id, peer)
            return Completion("chanunavail")

        self._legs_opened += 1
        leg_id = f"leg{self._legs_opened}-{channel.call_id}"
        session = CallSession(leg_id, channel.caller, peer)
        session = session_event(session, CallEvent.INVITE)
        invite = self._send_request(
            SipMethod.INVITE,
            registration.contact_host,
            registration.contact_port,
            leg_id,
            channel.caller,
            peer,
        )
        leg = DialLeg(session, registration.contact_host, registration.contact_port, invite)
        leg.timer = self.clock.call_later(action.timeout, lambda: self._dial_expired(channel))
        channel.leg = leg
        self.legs[leg_id] = channel
        self.sessions[leg_id] = session
        return _SUSPEND

    def _dial_expired(self, channel: Channel) -> None:
        leg = channel.leg
        if channel.ended or leg is None or leg.session.state not in (CallState.INVITING, CallState.RINGING):
            return
        self._set_session(channel, CallEvent.TIMEOUT)
        self.metrics.calls_no_answer += 1
        self._cancel_leg(channel)
        logger.info("call %s: %s did not answer", leg.session.id, leg.session.callee)

        callee = self.peers.get(leg.session.callee)
        if callee is not None and callee.mailbox:
            self._answer(channel)
            try:
                deposit_voicemail(
                    callee.mailbox,
                    channel.caller,
                    f"{channel.call_id}.gsm",
                    self.clock.now,
                    self.mailboxes,
                    self.notifier,
                )
                self.metrics.voicemail_deposits += 1
                channel.transcript.append(f"{ActionKind.VOICEMAIL.value}({callee.mailbox})")
            except MailboxNotFoundError as e:
                logger.warning("call %s: %s", channel.call_id, e)
        self._drive(channel, Completion("noanswer"))

    def _cancel_leg(self, channel: Channel) -> None:
        leg = channel.leg
        if leg is None:
            return
        if leg.timer is not None:
            leg.timer.cancel()
        if leg.session.state in (CallState.INVITING, CallState.RINGING, CallState.NO_ANSWER):
            self._send_request(SipMethod.CANCEL, leg.host, leg.port, leg.session.id, channel.caller, leg.session.callee)
        self.legs.pop(leg.session.id, None)
        self.sessions.pop(leg.session.id, None)
        channel.leg = None

    def _set_session(self, channel: Channel, event: CallEvent) -> None:
        leg = channel.leg
        leg.session = session_event(leg.session, event)
        self.sessions[leg.session.id] = leg.session

    # answering and teardown

    def _answer(self, channel: Channel) -> None:
        if channel.answered:
            return
        channel.answered = True
        self._open_media_for(channel, channel.src)
        response = make_response(
            channel.invite,
            200,
            [
                ("Contact", f"<sip:{channel.exec.exten}@{self.settings.server_address}:{self.settings.sip_port}>"),
                ("Content-Type", "application/sdp"),
            ],
            body=sdp_body(channel.rtp_port),
        )
        response = response.with_header("Content-Length", str(len(response.body)))
        self._reply_caller(channel, response)

    def _open_media_for(self, channel: Channel, address: str) -> None:
        if channel.rtp_port is None:
            port = self.settings.rtp_port_start
            while port in self._by_port:
                port += 2
            channel.rtp_port = port
            self._by_port[port] = channel
            self.pipeline.media_ports.add(port)
        rule = FilterRule(Proto.UDP, channel.rtp_port, address, Verdict.ACCEPT)
        if rule not in channel.rtp_rules:
            self.packet_filter.insert(rule)
            channel.rtp_rules.append(rule)

    def _hangup(self, channel: Channel) -> None:
        if channel.ended:
            return
        leg = channel.leg
        if leg is not None and leg.session.state == CallState.ACTIVE:
            self._set_session(channel, CallEvent.BYE)
            self.metrics.calls_completed += 1
            self._send_request(SipMethod.BYE, leg.host, leg.port, leg.session.id, channel.caller, leg.session.callee)
        else:
            self._cancel_leg(channel)
        if channel.answered:
            self._bye_caller(channel)
        else:
            self._reply_caller(channel, make_response(channel.invite, 480))
        self._close(channel)

    def _bye_caller(self, channel: Channel) -> None:
        self._send_request(
            SipMethod.BYE, channel.src, channel.sport, channel.call_id, channel.exec.exten, channel.caller
        )

    def _close(self, channel: Channel) -> None:
        self._stop_reading(channel)
        channel.ended = True
        for rule in channel.rtp_rules:
            self.packet_filter.delete_rule(rule)
        channel.rtp_rules.clear()
        if channel.rtp_port is not None:
            self._by_port.pop(channel.rtp_port, None)
            self.pipeline.media_ports.discard(channel.rtp_port)
        if channel.leg is not None:
            self.legs.pop(channel.leg.session.id, None)
            self.sessions.pop(channel.leg.session.id, None)
        self.channels.pop(channel.call_id, None)
        logger.info("call %s ended", channel.call_id)

    # outbound

    def _reply(self, packet: Packet, message: SipMessage) -> None:
        self.network.to_client(packet.src, packet.sport, encode(message), sport=self.settings.sip_port)

    def _reply_caller(self, channel: Channel, message: SipMessage) -> None:
        self.network.to_client(channel.src, channel.sport, encode(message), sport=self.settings.sip_port)

    def _send_request(
        self,
        method: SipMethod,
        host: str,
        port: int,
        call_id: str,
        from_user: str,
        to_user: str,
        body: bytes = b"",
        content_type: str | None = None,
    ) -> SipMessage:
        self._cseq += 1
        server = self.settings.server_address
        request = make_request(
            method,
            SipUri(to_user, host, port),
            from_uri=SipUri(from_user, server),
            to_uri=SipUri(to_user, server),
            call_id=call_id,
            cseq=self._cseq,
            via=f"{server}:{self.settings.sip_port}",
            contact=SipUri(from_user, server, self.settings.sip_port),
            body=body,
            content_type=content_type,
        )
        self.network.to_client(host, port, encode(request), sport=self.settings.sip_port)
        return request

    # inspection

    def transcript_of(self, caller: str) -> list[str]:
        """Transcript of the caller's most recent channel."""
        for channel in reversed(self.history):
            if channel.caller == caller:
                return list(channel.transcript)
        return []
