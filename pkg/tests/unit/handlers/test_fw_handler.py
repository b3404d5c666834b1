"""Unit tests for FwHandler."""

import json

import pytest

from minipbx.domain.state import StateManager
from minipbx.exceptions import StateNotFoundError, UnknownRuleError
from minipbx.handlers.fw_handler import FwHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.security import BlacklistEntry


class TestFwHandler:
    """Tests for FwHandler."""

    @pytest.fixture
    def handler(self, services):
        return FwHandler(*services)

    def load(self, state_path):
        return StateManager(FileSystem(), YAMLSerializer(), state_path).load_state()

    def test_list_default_chain(self, handler, workspace):
        lines = handler.list_rules().splitlines()
        assert lines[0] == "-P INPUT ACCEPT"
        assert lines[1] == "-A INPUT -p udp --dport 110 -j ACCEPT"
        assert lines[-1] == "-A INPUT -p tcp -j DROP"
        assert len(lines) == 13

    def test_list_json(self, handler, workspace):
        data = json.loads(handler.list_rules(format="json"))
        assert [r["position"] for r in data["rules"]] == list(range(1, 13))

    def test_insert_goes_to_head(self, handler, state_path):
        result = handler.insert(["-s", "198.51.100.7", "-p", "udp", "--dport", "5060", "-j", "DROP"])
        assert result == "Inserted -A INPUT -s 198.51.100.7 -p udp --dport 5060 -j DROP"
        assert self.load(state_path).rules[0].src == "198.51.100.7"

    def test_append_goes_to_tail(self, handler, state_path):
        handler.append(["-p", "tcp", "--dport", "443", "-j", "ACCEPT"])
        rules = self.load(state_path).rules
        assert rules[-1].dport == 443
        assert len(rules) == 13

    def test_delete_rule(self, handler, state_path):
        assert handler.delete(["-p", "tcp", "--dport", "22", "-j", "ACCEPT"]) == (
            "Deleted -A INPUT -p tcp --dport 22 -j ACCEPT"
        )
        assert all(rule.dport != 22 for rule in self.load(state_path).rules)

    def test_delete_unknown_rule(self, handler, workspace):
        with pytest.raises(UnknownRuleError):
            handler.delete(["-p", "tcp", "--dport", "8080", "-j", "ACCEPT"])

    def test_delete_blacklist_drop_clears_entry(self, handler, state_path):
        manager = StateManager(FileSystem(), YAMLSerializer(), state_path)
        handler.insert(["-s", "203.0.113.66", "-j", "DROP"])
        state = manager.load_state()
        state.blacklist["203.0.113.66"] = BlacklistEntry("203.0.113.66", 12.0, "flood", 10)
        manager.save_state(state)

        handler.delete(["-s", "203.0.113.66", "-j", "DROP"])
        state = manager.load_state()
        assert state.blacklist == {}
        assert len(state.rules) == 12

    def test_malformed_flags(self, handler, workspace):
        with pytest.raises(ValueError):
            handler.insert(["-p", "udp", "--dport"])

    def test_explicit_state_path(self, handler, state_path, tmp_path_factory, monkeypatch):
        monkeypatch.chdir(tmp_path_factory.mktemp("elsewhere"))
        text = handler.list_rules(state_path=state_path)
        assert text.startswith("-P INPUT ACCEPT")

    def test_no_workspace(self, handler, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        with pytest.raises(StateNotFoundError):
            handler.list_rules()
