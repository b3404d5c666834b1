"""Sealed frame and inner datagram layouts.

Sealed frame:  length (4, big-endian) | checksum (4) | ciphertext
Inner datagram: proto (1) | sport (2) | dport (2) | payload

The checksum is the additive sum of the plaintext octets modulo 2**32; a
mismatch after decryption means tampering or cipher desynchronisation.
"""

import struct

from minipbx.constants import SEAL_HEADER_SIZE
from minipbx.exceptions import TunnelIntegrityError
from minipbx.models.enums import Proto

from .rc4 import Rc4State

_SEAL = struct.Struct("!II")
_INNER = struct.Struct("!BHH")

_PROTO_NUMBERS = {Proto.ICMP: 1, Proto.TCP: 6, Proto.UDP: 17}
_NUMBER_PROTOS = {number: proto for proto, number in _PROTO_NUMBERS.items()}


def checksum(data: bytes) -> int:
    return sum(data) & 0xFFFFFFFF


def seal_frame(cipher: Rc4State, payload: bytes) -> bytes:
    """Encrypt payload with the send cipher and prepend the header."""
    return _SEAL.pack(len(payload), checksum(payload)) + cipher.process(payload)


def open_frame(cipher: Rc4State, frame: bytes) -> bytes:
    """Decrypt with the receive cipher and verify the header.

    Raises:
        TunnelIntegrityError: Short frame, length or checksum mismatch
    """
    if len(frame) < SEAL_HEADER_SIZE:
        raise TunnelIntegrityError(f"Sealed frame shorter than {SEAL_HEADER_SIZE} octets")
    length, expected = _SEAL.unpack_from(frame)
    ciphertext = frame[SEAL_HEADER_SIZE:]
    if length != len(ciphertext):
        raise TunnelIntegrityError(f"Length prefix {length} != {len(ciphertext)} octets")
    plaintext = cipher.process(ciphertext)
    if checksum(plaintext) != expected:
        raise TunnelIntegrityError("Checksum mismatch")
    return plaintext


def pack_inner(proto: Proto, sport: int, dport: int | None, payload: bytes) -> bytes:
    return _INNER.pack(_PROTO_NUMBERS[proto], sport, dport or 0) + payload


def unpack_inner(data: bytes) -> tuple[Proto, int, int | None, bytes]:
    """Split an inner datagram.

    Raises:
        TunnelIntegrityError: Short datagram or unknown protocol number
    """
    if len(data) < _INNER.size:
        raise TunnelIntegrityError("Inner datagram too short")
    number, sport, dport = _INNER.unpack_from(data)
    proto = _NUMBER_PROTOS.get(number)
    if proto is None:
        raise TunnelIntegrityError(f"Unknown inner protocol {number}")
    return proto, sport, (dport if proto.has_ports else None), data[_INNER.size :]
