"""Hostile traffic generators.

Each generator returns a deterministic schedule of packets relative to the
launch time; `launch` puts the schedule on the wire. Supported kinds:

    register-flood <n> <window> [user]   n REGISTERs evenly spread over window
    port-scan <lo>-<hi> [spacing]        one tcp packet per port, ascending
    brute-force peer:<name> <attempts> [spacing]
                                         REGISTERs carrying forged digests
    brute-force box:<box>@<ctx> <attempts> [spacing]
                                         guest INVITEs to the voicemail
                                         extension, guessing the password
"""

import logging
from dataclasses import dataclass

from minipbx.constants import DTMF_CONTENT_TYPE, SIP_PORT
from minipbx.domain.sipnode import compute_digest, credentials_header, encode, make_request
from minipbx.models.enums import Proto, SipMethod
from minipbx.models.sip import SipUri

from .clock import VirtualClock
from .network import Network

logger = logging.getLogger(__name__)

ATTACK_KINDS = ("register-flood", "port-scan", "brute-force")
FLOOD_USER = "100"
VOICEMAIL_EXTEN = "444"
ATTACKER_PORT = 5070


@dataclass(frozen=True)
class AttackPacket:
    """One attacker datagram, `offset` seconds after launch."""

    offset: float
    proto: Proto
    dport: int
    payload: bytes = b""
    sport: int = ATTACKER_PORT


def _sip_packet(
    offset: float,
    method: SipMethod,
    user: str,
    src: str,
    server: str,
    call_id: str,
    cseq: int,
    from_user: str | None = None,
    **kwargs,
) -> AttackPacket:
    request = make_request(
        method,
        SipUri(user, server, SIP_PORT),
        from_uri=SipUri(from_user or user, server),
        to_uri=SipUri(user, server),
        call_id=call_id,
        cseq=cseq,
        via=f"{src}:{ATTACKER_PORT}",
        contact=SipUri(user, src, ATTACKER_PORT),
        **kwargs,
    )
    return AttackPacket(offset, Proto.UDP, SIP_PORT, encode(request))


def register_flood(src: str, server: str, count: int, window: float, user: str = FLOOD_USER) -> list[AttackPacket]:
    if count < 1:
        raise ValueError("A flood needs at least one request")
    spacing = window / (count - 1) if count > 1 else 0.0
    return [
        _sip_packet(i * spacing, SipMethod.REGISTER, user, src, server, f"flood-{i}@{src}", i + 1)
        for i in range(count)
    ]


def port_scan(first: int, last: int, spacing: float = 0.0) -> list[AttackPacket]:
    if not 0 <= first <= last <= 65535:
        raise ValueError(f"Bad port range {first}-{last}")
    return [AttackPacket(n * spacing, Proto.TCP, port) for n, port in enumerate(range(first, last + 1))]


def brute_force_peer(src: str, server: str, peer: str, attempts: int, spacing: float = 2.0) -> list[AttackPacket]:
    packets = []
    for i in range(attempts):
        nonce = f"forged{i:04d}"
        guess = compute_digest(peer, f"{i:04d}", nonce)
        packets.append(
            _sip_packet(
                i * spacing,
                SipMethod.REGISTER,
                peer,
                src,
                server,
                f"guess-{i}@{src}",
                i + 1,
                extra_headers=[("Authorization", credentials_header(peer, nonce, guess))],
            )
        )
    return packets


def brute_force_box(src: str, server: str, attempts: int, spacing: float = 2.0) -> list[AttackPacket]:
    return [
        _sip_packet(
            i * spacing,
            SipMethod.INVITE,
            VOICEMAIL_EXTEN,
            src,
            server,
            f"vmguess-{i}@{src}",
            1,
            from_user="guest",
            body=f"{i:04d}#".encode("ascii"),
            content_type=DTMF_CONTENT_TYPE,
        )
        for i in range(attempts)
    ]


def generate_attack(kind: str, args: list[str], src: str, server: str) -> list[AttackPacket]:
    """Build the packet schedule for one `attack` step.

    Raises:
        ValueError: Unknown kind or bad arguments
    """
    try:
        if kind == "register-flood":
            user = args[2] if len(args) > 2 else FLOOD_USER
            return register_flood(src, server, int(args[0]), float(args[1]), user)
        if kind == "port-scan":
            first, _, last = args[0].partition("-")
            spacing = float(args[1]) if len(args) > 1 else 0.0
            return port_scan(int(first), int(last or first), spacing)
        if kind == "brute-force":
            target, attempts = args[0], int(args[1])
            spacing = float(args[2]) if len(args) > 2 else 2.0
            scheme, _, name = target.partition(":")
            if scheme == "peer" and name:
                return brute_force_peer(src, server, name, attempts, spacing)
            if scheme == "box" and name:
                return brute_force_box(src, server, attempts, spacing)
            raise ValueError(f"Unknown brute-force target {target!r}")
    except IndexError as e:
        raise ValueError(f"attack {kind}: missing argument") from e
    raise ValueError(f"Unknown attack kind {kind!r} (expected one of {', '.join(ATTACK_KINDS)})")


def launch(network: Network, clock: VirtualClock, src: str, packets: list[AttackPacket]) -> None:
    start = clock.now
    for packet in packets:
        clock.schedule(
            start + packet.offset,
            lambda p=packet: network.to_server(src, p.proto, p.dport, p.payload, sport=p.sport),
        )
    logger.info("%d packet(s) from %s scheduled", len(packets), src)
