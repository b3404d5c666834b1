"""Tunnel control channel on tcp/1723.

Requests are single lines: ``LOGIN user password`` answers ``OK <leased
address>``, ``DENIED`` or ``BUSY``; ``LOGOUT`` closes the caller's
session and answers ``BYE``.
"""

import logging
from collections.abc import Callable

from minipbx.constants import PPTP_PORT
from minipbx.domain.tunnel import TunnelServer
from minipbx.exceptions import PoolExhaustedError, TunnelAuthError
from minipbx.models.enums import EventKind, Proto
from minipbx.models.packet import Packet
from minipbx.models.security import SecurityEvent

from .clock import VirtualClock
from .metrics import RunMetrics
from .network import Network

logger = logging.getLogger(__name__)


class TunnelControl:
    def __init__(
        self,
        tunnel: TunnelServer,
        network: Network,
        clock: VirtualClock,
        metrics: RunMetrics,
        report: Callable[[SecurityEvent], object],
    ):
        self.tunnel = tunnel
        self.network = network
        self.clock = clock
        self.metrics = metrics
        self.report = report

    def receive(self, packet: Packet) -> None:
        words = packet.payload.decode("ascii", errors="replace").split()
        verb = words[0].upper() if words else ""
        if verb == "LOGIN" and len(words) == 3:
            reply = self._login(packet, words[1], words[2])
        elif verb == "LOGOUT":
            reply = self._logout(packet)
        else:
            reply = "ERROR"
            self.report(
                SecurityEvent(EventKind.MALFORMED_PACKET, packet.src, self.clock.now, "bad tunnel control request")
            )
        self.network.to_client(packet.src, packet.sport, reply.encode("ascii"), proto=Proto.TCP, sport=PPTP_PORT)

    def _login(self, packet: Packet, user: str, password: str) -> str:
        try:
            session = self.tunnel.establish(user, password, self.clock.now, outer=packet.src)
        except TunnelAuthError as e:
            self.report(SecurityEvent(EventKind.AUTH_FAILURE, packet.src, self.clock.now, str(e)))
            return "DENIED"
        except PoolExhaustedError as e:
            logger.warning("%s", e)
            return "BUSY"
        self.metrics.tunnels_established += 1
        return f"OK {session.leased_addr}"

    def _logout(self, packet: Packet) -> str:
        session = self.tunnel.session_for(packet.src)
        if session is not None:
            self.tunnel.close(session)
        return "BYE"
