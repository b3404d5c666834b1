"""Unit tests for RTP frames."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minipbx.domain.media import SsrcAllocator, decode_frame, encode_frame, next_frame
from minipbx.exceptions import RtpCodecError
from minipbx.models.media import DtmfEvent, MediaSession, RtpFrame


class TestRtpHeader:
    """Tests for the 12-octet header codec."""

    def test_gsm_header_bytes(self):
        frame = RtpFrame(payload_type=3, ssrc=0x02EDCFCE, seq=9933, timestamp=3550780)
        assert encode_frame(frame) == bytes.fromhex("800326cd00362e3c02edcfce")

    def test_marker_bit(self):
        frame = RtpFrame(payload_type=101, ssrc=1, seq=0, timestamp=0, marker=True)
        assert encode_frame(frame)[1] == 0x80 | 101
        assert decode_frame(encode_frame(frame)).marker

    @given(
        st.integers(0, 127),
        st.integers(0, (1 << 32) - 1),
        st.integers(0, (1 << 16) - 1),
        st.integers(0, (1 << 32) - 1),
        st.binary(max_size=33),
    )
    def test_decode_inverts_encode(self, pt, ssrc, seq, ts, payload):
        frame = RtpFrame(pt, ssrc, seq, ts, payload)
        assert decode_frame(encode_frame(frame)) == frame

    def test_short_buffer(self):
        with pytest.raises(RtpCodecError, match="12 octets"):
            decode_frame(b"\x80\x03")

    def test_wrong_version(self):
        with pytest.raises(RtpCodecError, match="version"):
            decode_frame(bytes.fromhex("400326cd00362e3c02edcfce"))

    def test_csrc_list_skipped(self):
        data = bytes.fromhex("810326cd00362e3c02edcfce") + b"\x00\x00\x00\x01" + b"gsm"
        assert decode_frame(data).payload == b"gsm"

    def test_field_ranges(self):
        with pytest.raises(ValueError):
            RtpFrame(payload_type=128, ssrc=0, seq=0, timestamp=0)


class TestMediaSession:
    """Tests for frame sequencing."""

    def test_counters_advance_per_frame(self):
        session = MediaSession(ssrc=7, next_seq=10, next_timestamp=1000)
        first, session = next_frame(session)
        second, session = next_frame(session)
        assert (first.seq, first.timestamp) == (10, 1000)
        assert (second.seq, second.timestamp) == (11, 1160)
        assert session.frame_count == 2

    def test_counters_wrap(self):
        session = MediaSession(ssrc=7, next_seq=0xFFFF, next_timestamp=(1 << 32) - 80)
        _, session = next_frame(session)
        assert session.next_seq == 0
        assert session.next_timestamp == 80

    def test_allocator_is_seeded_and_unique(self):
        a = SsrcAllocator(random.Random(5060))
        b = SsrcAllocator(random.Random(5060))
        ssrcs = [a.allocate() for _ in range(100)]
        assert ssrcs == [b.allocate() for _ in range(100)]
        assert len(set(ssrcs)) == 100

    def test_open_session_uses_gsm(self):
        session = SsrcAllocator(random.Random(1)).open_session()
        assert session.payload_type == 3
        assert session.frame_count == 0


class TestDtmf:
    def test_sequence(self):
        assert [e.digit for e in DtmfEvent.sequence("1001#")] == ["1", "0", "0", "1", "#"]

    def test_invalid_digit(self):
        with pytest.raises(ValueError):
            DtmfEvent("A")
