"""Real UDP transport for interop experiments.

The PBX keeps running on its virtual clock; the daemon advances that clock
to the event loop's elapsed time before every datagram and on a periodic
tick, so ring and digit timeouts still fire.
"""

import asyncio
import logging

from minipbx.models.enums import Proto
from minipbx.models.packet import Packet

from .bootstrap import Pbx

logger = logging.getLogger(__name__)

TICK_INTERVAL = 0.1


class _Endpoint(asyncio.DatagramProtocol):
    def __init__(self, daemon: "PbxDaemon", port: int):
        self.daemon = daemon
        self.port = port
        self.transport: asyncio.DatagramTransport | None = None

    def connection_made(self, transport):
        self.transport = transport

    def datagram_received(self, data: bytes, addr):
        self.daemon.receive(self.port, data, addr)

    def error_received(self, exc):
        logger.warning("socket error on port %d: %s", self.port, exc)


class PbxDaemon:
    """Binds the SIP port plus a block of RTP ports to one PBX."""

    def __init__(self, pbx: Pbx, host: str = "0.0.0.0", rtp_ports: int = 8):
        self.pbx = pbx
        self.host = host
        self.rtp_ports = rtp_ports
        self._endpoints: dict[int, _Endpoint] = {}
        self._started_at = 0.0
        self._loop: asyncio.AbstractEventLoop | None = None

    @property
    def ports(self) -> list[int]:
        start = self.pbx.settings.rtp_port_start
        return [self.pbx.settings.sip_port] + [start + 2 * n for n in range(self.rtp_ports)]

    def _elapsed(self) -> float:
        return self._loop.time() - self._started_at

    def _advance(self) -> None:
        self.pbx.clock.run_until(max(self._elapsed(), self.pbx.clock.now))

    def receive(self, port: int, data: bytes, addr) -> None:
        self._advance()
        packet = Packet(addr[0], Proto.UDP, port, data, arrival=self.pbx.clock.now, sport=addr[1])
        self.pbx.dispatch(packet)
        self._advance()

    def transmit(self, dst: str, dport: int, payload: bytes) -> None:
        if not dport:
            logger.debug("no port known for %s, dropping reply", dst)
            return
        endpoint = self._endpoints.get(self.pbx.settings.sip_port)
        if endpoint is not None and endpoint.transport is not None:
            endpoint.transport.sendto(payload, (dst, dport))

    async def serve(self, stop: asyncio.Event) -> None:
        self._loop = asyncio.get_running_loop()
        self._started_at = self._loop.time()
        self.pbx.network.transmit = self.transmit
        for port in self.ports:
            _, protocol = await self._loop.create_datagram_endpoint(
                lambda port=port: _Endpoint(self, port), local_addr=(self.host, port)
            )
            self._endpoints[port] = protocol
        logger.info("Listening on %s udp/%s", self.host, ", ".join(str(p) for p in self.ports))

        self.pbx.start()
        try:
            while not stop.is_set():
                self._advance()
                try:
                    await asyncio.wait_for(stop.wait(), TICK_INTERVAL)
                except asyncio.TimeoutError:
                    pass
        finally:
            self.pbx.stop()
            for endpoint in self._endpoints.values():
                if endpoint.transport is not None:
                    endpoint.transport.close()


def run_daemon(pbx: Pbx, host: str = "0.0.0.0", rtp_ports: int = 8) -> None:
    """Serve until interrupted."""
    daemon = PbxDaemon(pbx, host, rtp_ports)

    async def main() -> None:
        stop = asyncio.Event()
        try:
            await daemon.serve(stop)
        except asyncio.CancelledError:
            stop.set()

    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        logger.info("Interrupted")
