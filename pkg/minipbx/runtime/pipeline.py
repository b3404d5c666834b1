"""Packet pipeline: tunnel unwrap, filter, sentinel tap, delivery.

Every packet reaching the server, except RTP media, is counted toward its
source's rate window before the verdict takes effect, so floods against
closed ports are still seen. A packet whose own arrival triggers the
blacklist is not delivered.
"""

import logging
from collections import deque
from collections.abc import Callable
from dataclasses import dataclass

from minipbx.constants import PPTP_PORT
from minipbx.domain.pktfilter import PacketFilter
from minipbx.domain.pktfilter.chain import Refusal
from minipbx.domain.sentinel import Sentinel
from minipbx.domain.sentinel.response import drop_rule
from minipbx.domain.tunnel import TunnelServer, unpack_inner
from minipbx.exceptions import TunnelIntegrityError
from minipbx.models.enums import EventKind, Proto, Verdict
from minipbx.models.packet import FilterRule, Packet
from minipbx.models.security import SecurityEvent

from .clock import VirtualClock
from .metrics import RunMetrics

logger = logging.getLogger(__name__)

Handler = Callable[[Packet], None]


@dataclass(frozen=True)
class Outcome:
    packet: Packet
    verdict: Verdict
    rule: FilterRule | None = None
    service: str | None = None
    refusal: Refusal | None = None


class Pipeline:
    def __init__(
        self,
        clock: VirtualClock,
        packet_filter: PacketFilter,
        sentinel: Sentinel,
        metrics: RunMetrics,
        tunnel: TunnelServer | None = None,
        history_limit: int | None = None,
    ):
        self.clock = clock
        self.packet_filter = packet_filter
        self.sentinel = sentinel
        self.metrics = metrics
        self.tunnel = tunnel
        self._services: dict[tuple[Proto, int], tuple[str, Handler]] = {}
        self._media: Handler | None = None
        self.media_ports: set[int] = set()
        self.deliveries: deque[tuple[float, str, str]] = deque(maxlen=history_limit)

    def register_service(self, proto: Proto, port: int, name: str, handler: Handler) -> None:
        self._services[(proto, port)] = (name, handler)

    def register_media(self, handler: Handler) -> None:
        self._media = handler

    def is_media(self, packet: Packet) -> bool:
        return packet.proto == Proto.UDP and packet.dport in self.media_ports

    def dispatch(self, packet: Packet) -> Outcome:
        """Run one packet through the server."""
        if self.tunnel is not None and packet.proto == Proto.UDP and packet.dport == PPTP_PORT:
            session = self.tunnel.session_for(packet.src)
            if session is not None:
                self.tunnel.capture(packet.arrival, "in", packet.src, packet.payload)
                try:
                    proto, sport, dport, payload = unpack_inner(session.open(packet.payload))
                except TunnelIntegrityError as e:
                    return self._integrity_failure(packet, str(e))
                packet = Packet(
                    session.leased_addr,
                    proto,
                    dport,
                    payload,
                    arrival=packet.arrival,
                    sport=sport,
                    tunnel_outer=packet.src,
                )

        verdict, rule = self.packet_filter.classify(packet)

        if not self.is_media(packet):
            command = self.sentinel.observe_request(self._request_event(packet))
            if command is not None and verdict == Verdict.ACCEPT:
                verdict, rule = Verdict.DROP, drop_rule(packet.src)

        self.metrics.count_verdict(verdict)

        if verdict == Verdict.DROP:
            if rule is not None and not rule.is_blacklist_drop:
                self.sentinel.report(
                    SecurityEvent(
                        EventKind.PORT_PROBE,
                        packet.src,
                        packet.arrival,
                        f"{packet.proto.value}/{packet.dport} dropped",
                    )
                )
            return Outcome(packet, verdict, rule)

        if verdict == Verdict.REJECT:
            refusal = self.packet_filter.refusals[-1]
            return Outcome(packet, verdict, rule, refusal=refusal)

        return Outcome(packet, verdict, rule, service=self._deliver(packet))

    def _deliver(self, packet: Packet) -> str | None:
        if self.is_media(packet) and self._media is not None:
            name, handler = "media", self._media
        else:
            entry = self._services.get((packet.proto, packet.dport))
            if entry is None:
                return None
            name, handler = entry
        self.deliveries.append((packet.arrival, packet.src, name))
        handler(packet)
        return name

    def _integrity_failure(self, packet: Packet, reason: str) -> Outcome:
        logger.warning("tunnel frame from %s failed integrity: %s", packet.src, reason)
        self.sentinel.observe_request(self._request_event(packet))
        self.metrics.count_verdict(Verdict.DROP)
        self.sentinel.report(SecurityEvent(EventKind.INTEGRITY_WARNING, packet.src, packet.arrival, reason))
        return Outcome(packet, Verdict.DROP)

    @staticmethod
    def _request_event(packet: Packet) -> SecurityEvent:
        return SecurityEvent(
            EventKind.GENERIC,
            packet.src,
            packet.arrival,
            f"{packet.proto.value}/{packet.dport}",
        )

    def deliveries_after_blacklist(self) -> int:
        """Deliveries from a source later than its blacklisting."""
        entries = self.sentinel.responder.blacklist.entries
        return sum(1 for at, src, _ in self.deliveries if src in entries and at > entries[src].since)
