"""Unit tests for the hostile traffic generators."""

import pytest

from minipbx.domain.sipnode import decode
from minipbx.models.enums import Proto, SipMethod
from minipbx.runtime.attacks import generate_attack

SERVER = "192.168.100.37"
ATTACKER = "203.0.113.66"


class TestGenerators:
    """Tests for generate_attack."""

    def test_register_flood_spacing(self):
        packets = generate_attack("register-flood", ["50", "30"], ATTACKER, SERVER)
        assert len(packets) == 50
        assert packets[0].offset == 0.0
        assert packets[1].offset == pytest.approx(30 / 49)
        assert packets[-1].offset == pytest.approx(30.0)
        message = decode(packets[0].payload)
        assert message.method == SipMethod.REGISTER
        assert message.uri.user == "100"

    def test_register_flood_custom_user(self):
        packets = generate_attack("register-flood", ["2", "1", "harish"], ATTACKER, SERVER)
        assert decode(packets[1].payload).uri.user == "harish"

    def test_port_scan(self):
        packets = generate_attack("port-scan", ["1-1024", "0.01"], ATTACKER, SERVER)
        assert [p.dport for p in packets[:3]] == [1, 2, 3]
        assert len(packets) == 1024
        assert all(p.proto == Proto.TCP for p in packets)
        assert packets[-1].offset == pytest.approx(10.23)

    def test_single_port_scan(self):
        assert [p.dport for p in generate_attack("port-scan", ["22"], ATTACKER, SERVER)] == [22]

    def test_brute_force_peer_carries_digests(self):
        packets = generate_attack("brute-force", ["peer:harish", "3"], ATTACKER, SERVER)
        messages = [decode(p.payload) for p in packets]
        assert all(m.header("Authorization").startswith("Digest") for m in messages)
        assert [p.offset for p in packets] == [0.0, 2.0, 4.0]

    def test_brute_force_box_guesses_passwords(self):
        packets = generate_attack("brute-force", ["box:756@vmail", "12", "2"], ATTACKER, SERVER)
        first = decode(packets[0].payload)
        assert first.method == SipMethod.INVITE
        assert first.uri.user == "444"
        assert first.body == b"0000#"
        assert decode(packets[11].payload).body == b"0011#"

    @pytest.mark.parametrize(
        "kind,args",
        [
            ("smurf", ["1"]),
            ("brute-force", ["mailbox:1", "3"]),
            ("port-scan", ["1024-1"]),
            ("register-flood", ["0", "10"]),
            ("register-flood", []),
        ],
    )
    def test_bad_arguments(self, kind, args):
        with pytest.raises(ValueError):
            generate_attack(kind, args, ATTACKER, SERVER)
