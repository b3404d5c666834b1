"""RTP media and DTMF models."""

from dataclasses import dataclass

from minipbx.constants import DTMF_DIGITS, GSM_PAYLOAD_TYPE


@dataclass(frozen=True)
class RtpFrame:
    """One RTP datagram (fixed 12-octet header, no CSRC list)."""

    payload_type: int
    ssrc: int
    seq: int
    timestamp: int
    payload: bytes = b""
    marker: bool = False

    def __post_init__(self):
        if not 0 <= self.payload_type < 128:
            raise ValueError(f"Payload type out of range: {self.payload_type}")
        if not 0 <= self.seq < 1 << 16:
            raise ValueError(f"Sequence number out of range: {self.seq}")
        if not 0 <= self.timestamp < 1 << 32:
            raise ValueError(f"Timestamp out of range: {self.timestamp}")
        if not 0 <= self.ssrc < 1 << 32:
            raise ValueError(f"SSRC out of range: {self.ssrc}")


@dataclass(frozen=True)
class MediaSession:
    """Sender-side counters of one media stream."""

    ssrc: int
    next_seq: int
    next_timestamp: int
    frame_count: int = 0
    payload_type: int = GSM_PAYLOAD_TYPE


@dataclass(frozen=True)
class DtmfEvent:
    """A digit pressed by a caller."""

    digit: str
    session: str | None = None

    def __post_init__(self):
        if len(self.digit) != 1 or self.digit not in DTMF_DIGITS:
            raise ValueError(f"Not a DTMF digit: {self.digit!r}")

    @classmethod
    def sequence(cls, digits: str, session: str | None = None) -> list["DtmfEvent"]:
        """One event per character of a digit string."""
        return [cls(digit, session) for digit in digits]
