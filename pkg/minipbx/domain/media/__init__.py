"""RTP media frames."""

from minipbx.domain.media.rtp import SsrcAllocator, decode_frame, encode_frame, next_frame

__all__ = ["SsrcAllocator", "decode_frame", "encode_frame", "next_frame"]
