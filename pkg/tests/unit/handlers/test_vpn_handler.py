"""Unit tests for VpnHandler."""

import json

import pytest

from minipbx.domain.state import StateManager
from minipbx.handlers.vpn_handler import VpnHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.state import TunnelLease


class TestVpnHandler:
    """Tests for VpnHandler."""

    @pytest.fixture
    def handler(self, services):
        return VpnHandler(*services)

    @pytest.fixture
    def leased(self, state_path):
        manager = StateManager(FileSystem(), YAMLSerializer(), state_path)
        state = manager.load_state()
        state.tunnels = [
            TunnelLease("harish", "192.168.100.10", 0.5, "203.0.113.50"),
            TunnelLease("bob", "192.168.100.11", 3.0, "203.0.113.51"),
        ]
        manager.save_state(state)
        return manager

    def test_no_sessions(self, handler, workspace):
        assert handler.sessions() == "No tunnel sessions."

    def test_sessions_sorted(self, handler, leased):
        assert handler.sessions().splitlines() == [
            "bob\t192.168.100.11\t3.000",
            "harish\t192.168.100.10\t0.500",
        ]

    def test_sessions_json(self, handler, leased):
        data = json.loads(handler.sessions(format="json"))
        assert {s["user"] for s in data["sessions"]} == {"harish", "bob"}

    def test_kick_frees_lease(self, handler, leased):
        assert handler.kick("harish") == "Kicked harish from 192.168.100.10"
        assert [lease.user for lease in leased.load_state().tunnels] == ["bob"]

    def test_kick_without_session(self, handler, workspace):
        with pytest.raises(ValueError, match="No tunnel session for carol"):
            handler.kick("carol")
