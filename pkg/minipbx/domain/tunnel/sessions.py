"""Tunnel sessions, address pool and the tunnel server.

Both ends key a send and a receive cipher from the same derived key, so
the client's send keystream is the server's receive keystream and vice
versa. Sessions are indexed by the client's outer address.
"""

import ipaddress
import logging
from collections import deque
from dataclasses import dataclass

from minipbx.exceptions import PoolExhaustedError, TunnelAuthError, TunnelClosedError
from minipbx.models.conf import CredentialTable, TunnelConfig
from minipbx.models.state import TunnelLease

from .framing import open_frame, seal_frame
from .rc4 import Rc4State, derive_key

logger = logging.getLogger(__name__)


@dataclass
class TunnelSession:
    """One end of an established tunnel."""

    user: str
    leased_addr: str
    send_cipher: Rc4State
    recv_cipher: Rc4State
    established_at: float
    outer: str = ""
    closed: bool = False

    @classmethod
    def keyed(cls, user: str, password: str, leased_addr: str, at: float, outer: str = "") -> "TunnelSession":
        key = derive_key(user, password)
        return cls(user, leased_addr, Rc4State.from_key(key), Rc4State.from_key(key), at, outer)

    def seal(self, payload: bytes) -> bytes:
        if self.closed:
            raise TunnelClosedError(f"Tunnel of {self.user} is closed")
        return seal_frame(self.send_cipher, payload)

    def open(self, frame: bytes) -> bytes:
        if self.closed:
            raise TunnelClosedError(f"Tunnel of {self.user} is closed")
        return open_frame(self.recv_cipher, frame)

    def lease(self) -> TunnelLease:
        return TunnelLease(self.user, self.leased_addr, self.established_at, self.outer)


class AddressPool:
    """Lowest-free allocation over the configured range."""

    def __init__(self, config: TunnelConfig):
        self.addresses = config.pool
        self._leased: set[str] = set()

    def lease(self) -> str:
        for address in self.addresses:
            if address not in self._leased:
                self._leased.add(address)
                return address
        raise PoolExhaustedError(f"All {len(self.addresses)} pool addresses are leased")

    def claim(self, address: str) -> None:
        """Mark an address as leased (restoring persisted leases)."""
        if address not in self.addresses:
            raise ValueError(f"{address} is outside the pool")
        self._leased.add(address)

    def release(self, address: str) -> None:
        self._leased.discard(address)

    @property
    def leased(self) -> set[str]:
        return set(self._leased)


@dataclass
class WireRecord:
    """One sealed frame as seen on the wire."""

    at: float
    direction: str
    outer: str
    octets: bytes


class TunnelServer:
    """Authenticates clients, leases addresses, seals and opens frames."""

    def __init__(self, config: TunnelConfig, credentials: CredentialTable, history_limit: int | None = None):
        self.config = config
        self.credentials = credentials
        self.pool = AddressPool(config)
        self._by_outer: dict[str, TunnelSession] = {}
        self.wire: deque[WireRecord] = deque(maxlen=history_limit)

    def establish(self, user: str, password: str, at: float, outer: str) -> TunnelSession:
        """Authenticate and lease.

        Raises:
            ValueError: If no outer address is given
            TunnelAuthError: Unknown user or wrong password
            PoolExhaustedError: No free pool address
        """
        if not outer:
            raise ValueError("A tunnel needs the client's outer address")
        credential = self.credentials.lookup(user)
        if credential is None or credential.secret != password:
            raise TunnelAuthError(f"Tunnel login refused for {user}")
        existing = self._by_outer.get(outer)
        if existing is not None:
            self.close(existing)
        session = TunnelSession.keyed(user, password, self.pool.lease(), at, outer)
        self._by_outer[outer] = session
        logger.info("Tunnel for %s established, leased %s", user, session.leased_addr)
        return session

    def session_for(self, outer: str) -> TunnelSession | None:
        return self._by_outer.get(outer)

    def session_by_address(self, leased_addr: str) -> TunnelSession | None:
        for session in self._by_outer.values():
            if session.leased_addr == leased_addr:
                return session
        return None

    def close(self, session: TunnelSession) -> None:
        session.closed = True
        self.pool.release(session.leased_addr)
        if self._by_outer.get(session.outer) is session:
            del self._by_outer[session.outer]
        logger.info("Tunnel for %s closed, released %s", session.user, session.leased_addr)

    def kick(self, user: str) -> list[TunnelSession]:
        """Close every live session of a user."""
        kicked = [s for s in self.sessions() if s.user == user]
        for session in kicked:
            self.close(session)
        return kicked

    def sessions(self) -> list[TunnelSession]:
        return sorted(self._by_outer.values(), key=lambda s: ipaddress.IPv4Address(s.leased_addr))

    def capture(self, at: float, direction: str, outer: str, octets: bytes) -> None:
        self.wire.append(WireRecord(at, direction, outer, octets))
