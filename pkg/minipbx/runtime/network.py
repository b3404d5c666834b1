"""Simulated wire between client endpoints and the server.

Packets to the server are queued on the virtual clock at the current
time, so a reply never re-enters the pipeline while it is still
dispatching. Packets to clients go through the client's tunnel when the
destination is a leased address.
"""

import logging
from collections.abc import Callable
from typing import Protocol

from minipbx.domain.tunnel import TunnelServer, pack_inner
from minipbx.models.enums import Proto
from minipbx.models.packet import Packet

from .clock import VirtualClock

logger = logging.getLogger(__name__)


class Endpoint(Protocol):
    address: str

    def deliver(self, proto: Proto, sport: int, dport: int, payload: bytes) -> None: ...

    def deliver_sealed(self, frame: bytes) -> None: ...


class Network:
    def __init__(self, clock: VirtualClock, tunnel: TunnelServer | None = None):
        self.clock = clock
        self.tunnel = tunnel
        self.server: Callable[[Packet], object] | None = None
        # Daemon mode hands client-bound datagrams to a real socket instead.
        self.transmit: Callable[[str, int, bytes], None] | None = None
        self._endpoints: dict[str, Endpoint] = {}
        self.unrouted = 0

    def attach(self, endpoint: Endpoint) -> None:
        self._endpoints[endpoint.address] = endpoint

    def endpoint(self, address: str) -> Endpoint | None:
        return self._endpoints.get(address)

    def to_server(self, src: str, proto: Proto, dport: int | None, payload: bytes = b"", sport: int = 0) -> None:
        """Queue a datagram for the server at the current virtual time."""
        if self.server is None:
            raise RuntimeError("No server attached to the network")

        def arrive() -> None:
            packet = Packet(src, proto, dport, payload, arrival=self.clock.now, sport=sport)
            self.server(packet)

        self.clock.schedule(self.clock.now, arrive)

    def to_client(self, dst: str, dport: int, payload: bytes, proto: Proto = Proto.UDP, sport: int = 5060) -> None:
        """Send a server datagram to a client address."""
        if self.transmit is not None:
            self.transmit(dst, dport, payload)
            return

        session = self.tunnel.session_by_address(dst) if self.tunnel else None
        if session is not None:
            frame = session.seal(pack_inner(proto, sport, dport, payload))
            self.tunnel.capture(self.clock.now, "out", session.outer, frame)
            endpoint = self._endpoints.get(session.outer)
            if endpoint is not None:
                self.clock.schedule(self.clock.now, lambda: endpoint.deliver_sealed(frame))
                return
        else:
            endpoint = self._endpoints.get(dst)
            if endpoint is not None:
                self.clock.schedule(self.clock.now, lambda: endpoint.deliver(proto, sport, dport, payload))
                return

        self.unrouted += 1
        logger.debug("no endpoint for %s:%d", dst, dport)
