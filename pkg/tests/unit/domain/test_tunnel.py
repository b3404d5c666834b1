"""Unit tests for RC4, frame sealing, the address pool and the tunnel server."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minipbx.domain.tunnel import (
    AddressPool,
    Rc4State,
    TunnelServer,
    TunnelSession,
    derive_key,
    open_frame,
    pack_inner,
    rc4_apply,
    seal_frame,
    unpack_inner,
)
from minipbx.exceptions import PoolExhaustedError, TunnelAuthError, TunnelClosedError, TunnelIntegrityError
from minipbx.models.conf import Credential, CredentialTable, TunnelConfig
from minipbx.models.enums import Proto


def arc4_reference(key: bytes, data: bytes) -> bytes:
    """Same transform through the cryptography package."""
    pytest.importorskip("cryptography")
    from cryptography.hazmat.primitives.ciphers import Cipher

    try:
        from cryptography.hazmat.decrepit.ciphers.algorithms import ARC4
    except ImportError:
        from cryptography.hazmat.primitives.ciphers.algorithms import ARC4
    return Cipher(ARC4(key), mode=None).encryptor().update(data)


class TestRc4:
    """Tests for the key schedule and keystream."""

    @pytest.mark.parametrize(
        "key,plaintext,ciphertext",
        [
            (b"Key", b"Plaintext", "bbf316e8d940af0ad3"),
            (b"Wiki", b"pedia", "1021bf0420"),
            (b"Secret", b"Attack at dawn", "45a01f645fc35b383552544b9bf5"),
        ],
    )
    def test_published_vectors(self, key, plaintext, ciphertext):
        assert Rc4State.from_key(key).process(plaintext).hex() == ciphertext

    def test_keystream_sixteen_octet_key(self):
        stream = Rc4State.from_key(bytes(range(1, 17))).keystream(32)
        assert stream.hex() == "9ac7cc9a609d1ef7b2932899cde41b975248c4959014126a6e8a84f11d1a9e1c"

    def test_derived_key(self):
        key = derive_key("harish", "1234")
        assert key.hex() == "8c1b326093b88e79a2c9d06f938bc551"
        assert Rc4State.from_key(key).keystream(16).hex() == "e15f24b59fb6934bf512f3678798940b"

    def test_key_length_bounds(self):
        with pytest.raises(ValueError):
            Rc4State.from_key(b"")
        with pytest.raises(ValueError):
            Rc4State.from_key(bytes(257))

    def test_pure_apply_leaves_input(self):
        state = Rc4State.from_key(b"Key")
        first, advanced = rc4_apply(state, b"abc")
        again, _ = rc4_apply(state, b"abc")
        assert first == again
        assert (state.i, state.j) == (0, 0)
        assert advanced.i == 3

    @given(st.binary(min_size=1, max_size=64), st.binary(max_size=200))
    def test_permutation_preserved(self, key, data):
        state = Rc4State.from_key(key)
        state.process(data)
        assert state.is_permutation()

    @given(st.binary(min_size=1, max_size=32), st.binary(max_size=128))
    def test_matches_reference_cipher(self, key, data):
        assert Rc4State.from_key(key).process(data) == arc4_reference(key, data)


class TestFraming:
    """Tests for sealed frames and inner datagrams."""

    def test_seal_then_open(self):
        key = derive_key("harish", "1234")
        frame = seal_frame(Rc4State.from_key(key), b"REGISTER")
        assert frame[:4] == (8).to_bytes(4, "big")
        assert open_frame(Rc4State.from_key(key), frame) == b"REGISTER"

    def test_tampered_frame(self):
        key = derive_key("harish", "1234")
        frame = bytearray(seal_frame(Rc4State.from_key(key), b"REGISTER"))
        frame[-1] ^= 0x01
        with pytest.raises(TunnelIntegrityError, match="Checksum"):
            open_frame(Rc4State.from_key(key), bytes(frame))

    def test_truncated_frame(self):
        with pytest.raises(TunnelIntegrityError, match="Length prefix"):
            open_frame(Rc4State.from_key(b"k"), (5).to_bytes(4, "big") + bytes(4) + b"abc")
        with pytest.raises(TunnelIntegrityError):
            open_frame(Rc4State.from_key(b"k"), b"abc")

    def test_inner_datagram(self):
        data = pack_inner(Proto.UDP, 5060, 5060, b"OPTIONS")
        assert unpack_inner(data) == (Proto.UDP, 5060, 5060, b"OPTIONS")
        assert unpack_inner(pack_inner(Proto.ICMP, 0, None, b"")) == (Proto.ICMP, 0, None, b"")

    def test_unknown_inner_protocol(self):
        with pytest.raises(TunnelIntegrityError, match="protocol"):
            unpack_inner(b"\x63\x00\x01\x00\x02")


class TestTunnelServer:
    """Tests for tunnel establishment and the address pool."""

    @pytest.fixture
    def config(self):
        return TunnelConfig("192.168.100.37", "192.168.100.10", "192.168.100.11")

    @pytest.fixture
    def server(self, config):
        credentials = CredentialTable([Credential("harish", "1234"), Credential("bob", "bobpass")])
        return TunnelServer(config, credentials)

    def test_establish_leases_lowest(self, server):
        session = server.establish("harish", "1234", 0.0, outer="203.0.113.50")
        assert session.leased_addr == "192.168.100.10"
        assert server.session_for("203.0.113.50") is session
        assert server.session_by_address("192.168.100.10") is session

    def test_client_and_server_interoperate(self, server):
        session = server.establish("harish", "1234", 0.0, outer="203.0.113.50")
        client = TunnelSession.keyed("harish", "1234", session.leased_addr, 0.0)
        for payload in (b"one", b"two", b"three"):
            assert session.open(client.seal(payload)) == payload
            assert client.open(session.seal(payload[::-1])) == payload[::-1]

    def test_wrong_password(self, server):
        with pytest.raises(TunnelAuthError):
            server.establish("harish", "0000", 0.0, outer="203.0.113.50")

    def test_pool_exhaustion(self, server):
        server.establish("harish", "1234", 0.0, outer="203.0.113.50")
        server.establish("bob", "bobpass", 0.0, outer="203.0.113.51")
        with pytest.raises(PoolExhaustedError):
            server.establish("bob", "bobpass", 0.0, outer="203.0.113.52")

    def test_re_establish_from_same_outer_replaces(self, server):
        first = server.establish("harish", "1234", 0.0, outer="203.0.113.50")
        second = server.establish("harish", "1234", 5.0, outer="203.0.113.50")
        assert first.closed
        assert second.leased_addr == "192.168.100.10"
        assert len(server.sessions()) == 1

    def test_kick_releases_address(self, server):
        session = server.establish("harish", "1234", 0.0, outer="203.0.113.50")
        assert server.kick("harish") == [session]
        assert server.pool.leased == set()
        with pytest.raises(TunnelClosedError):
            session.seal(b"x")

    def test_lease_view(self, server):
        lease = server.establish("bob", "bobpass", 2.5, outer="203.0.113.51").lease()
        assert (lease.user, lease.address, lease.established_at) == ("bob", "192.168.100.10", 2.5)

    def test_outer_address_required(self, server):
        with pytest.raises(ValueError, match="outer address"):
            server.establish("harish", "1234", 0.0, outer="")
        assert server.pool.leased == set()

    def test_wire_capture_bounded(self, config):
        server = TunnelServer(config, CredentialTable([Credential("harish", "1234")]), history_limit=4)
        for n in range(10):
            server.capture(float(n), "in", "203.0.113.50", b"frame")
        assert [record.at for record in server.wire] == [6.0, 7.0, 8.0, 9.0]

    def test_claim_outside_pool(self, config):
        with pytest.raises(ValueError, match="outside"):
            AddressPool(config).claim("10.0.0.1")
