"""RTP frame generation and the fixed 12-octet header codec.

Header layout (big-endian):

    0      V=2 | P | X | CC
    1      M | PT
    2-3    sequence number
    4-7    timestamp
    8-11   SSRC
"""

import random
import struct
from dataclasses import replace

from minipbx.constants import GSM_PAYLOAD_TYPE, RTP_HEADER_SIZE, RTP_VERSION, SAMPLES_PER_FRAME
from minipbx.exceptions import RtpCodecError
from minipbx.models.media import MediaSession, RtpFrame

_HEADER = struct.Struct("!BBHII")


def next_frame(session: MediaSession, payload: bytes = b"") -> tuple[RtpFrame, MediaSession]:
    """Frame at the session's counters; counters advance by one frame."""
    frame = RtpFrame(
        payload_type=session.payload_type,
        ssrc=session.ssrc,
        seq=session.next_seq,
        timestamp=session.next_timestamp,
        payload=payload,
    )
    advanced = replace(
        session,
        next_seq=(session.next_seq + 1) % (1 << 16),
        next_timestamp=(session.next_timestamp + SAMPLES_PER_FRAME) % (1 << 32),
        frame_count=session.frame_count + 1,
    )
    return frame, advanced


def encode_frame(frame: RtpFrame) -> bytes:
    first = RTP_VERSION << 6
    second = (0x80 if frame.marker else 0) | frame.payload_type
    return _HEADER.pack(first, second, frame.seq, frame.timestamp, frame.ssrc) + frame.payload


def decode_frame(data: bytes) -> RtpFrame:
    """Parse one datagram.

    Raises:
        RtpCodecError: Short buffer or version other than 2
    """
    if len(data) < RTP_HEADER_SIZE:
        raise RtpCodecError(f"RTP frame needs {RTP_HEADER_SIZE} octets, got {len(data)}")
    first, second, seq, timestamp, ssrc = _HEADER.unpack_from(data)
    version = first >> 6
    if version != RTP_VERSION:
        raise RtpCodecError(f"Unsupported RTP version {version}")
    csrc_count = first & 0x0F
    offset = RTP_HEADER_SIZE + 4 * csrc_count
    if len(data) < offset:
        raise RtpCodecError("Truncated CSRC list")
    return RtpFrame(
        payload_type=second & 0x7F,
        ssrc=ssrc,
        seq=seq,
        timestamp=timestamp,
        payload=data[offset:],
        marker=bool(second & 0x80),
    )


class SsrcAllocator:
    """Hands out SSRCs that never repeat within one run."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self._used: set[int] = set()

    def allocate(self) -> int:
        while True:
            ssrc = self.rng.getrandbits(32)
            if ssrc not in self._used:
                self._used.add(ssrc)
                return ssrc

    def open_session(self, payload_type: int = GSM_PAYLOAD_TYPE) -> MediaSession:
        """New stream with a fresh SSRC and random initial counters."""
        return MediaSession(
            ssrc=self.allocate(),
            next_seq=self.rng.getrandbits(16),
            next_timestamp=self.rng.getrandbits(32),
            payload_type=payload_type,
        )
