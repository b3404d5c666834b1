"""Tunnel layer: RC4 sealing, address pool and sessions."""

from minipbx.domain.tunnel.framing import open_frame, pack_inner, seal_frame, unpack_inner
from minipbx.domain.tunnel.rc4 import Rc4State, derive_key, rc4_apply
from minipbx.domain.tunnel.sessions import AddressPool, TunnelServer, TunnelSession, WireRecord

__all__ = [
    "AddressPool",
    "Rc4State",
    "TunnelServer",
    "TunnelSession",
    "WireRecord",
    "derive_key",
    "open_frame",
    "pack_inner",
    "rc4_apply",
    "seal_frame",
    "unpack_inner",
]
