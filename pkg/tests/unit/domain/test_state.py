"""Unit tests for the persisted admin state."""

import pytest

from minipbx.domain.pktfilter import default_chain
from minipbx.domain.state import StateManager
from minipbx.exceptions import InvalidSettingsError, StateNotFoundError
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.acl import GrantTriple, ObjectScope, Principal
from minipbx.models.enums import Verdict
from minipbx.models.packet import FilterRule
from minipbx.models.security import BlacklistEntry
from minipbx.models.state import PbxState, TunnelLease


@pytest.fixture
def state() -> PbxState:
    rules = [FilterRule(src="203.0.113.66", verdict=Verdict.DROP), *default_chain().rules]
    return PbxState(
        rules=rules,
        blacklist={"203.0.113.66": BlacklistEntry("203.0.113.66", 12.0, "11 requests within 60s", 10)},
        tunnels=[TunnelLease("harish", "192.168.100.10", 0.0, "203.0.113.50")],
        grants={GrantTriple(Principal("ivr", "127.0.0.1"), ObjectScope("school", "attendance"), "SELECT")},
        passwords={"ivr@127.0.0.1": "5f4dcc3b5aa765d61d8327deb882cf99"},
    )


class TestStateManager:
    """Tests for StateManager."""

    @pytest.fixture
    def manager(self, tmp_path):
        return StateManager(FileSystem(), YAMLSerializer(), str(tmp_path / ".minipbx" / "state.yaml"))

    def test_save_then_load(self, manager, state, tmp_path):
        manager.save_state(state)
        fresh = StateManager(FileSystem(), YAMLSerializer(), str(tmp_path / ".minipbx" / "state.yaml"))
        loaded = fresh.load_state()
        assert loaded.rules == state.rules
        assert loaded.blacklist == state.blacklist
        assert loaded.tunnels == state.tunnels
        assert loaded.grants == state.grants
        assert loaded.passwords == state.passwords

    def test_rule_order_kept(self, manager, state):
        manager.save_state(state)
        text = (manager.state_path).read_text()
        assert text.index("203.0.113.66") < text.index("dport: 110")

    def test_missing_file(self, manager):
        with pytest.raises(StateNotFoundError):
            manager.load_state()

    def test_malformed_file(self, manager):
        manager.state_path.parent.mkdir(parents=True)
        manager.state_path.write_text("chain:\n  policy: MAYBE\n")
        with pytest.raises(InvalidSettingsError):
            manager.load_state()

    def test_for_workspace_without_workspace(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        with pytest.raises(StateNotFoundError):
            StateManager.for_workspace(FileSystem(), YAMLSerializer())

    def test_for_workspace_finds_enclosing_root(self, tmp_path, monkeypatch):
        (tmp_path / ".minipbx").mkdir()
        nested = tmp_path / "a" / "b"
        nested.mkdir(parents=True)
        monkeypatch.chdir(nested)
        manager = StateManager.for_workspace(FileSystem(), YAMLSerializer())
        assert manager.state_path == tmp_path / ".minipbx" / "state.yaml"

    def test_dict_output_is_sorted(self, state):
        state.blacklist["10.0.0.1"] = BlacklistEntry("10.0.0.1", 1.0, "manual", 8)
        data = state.to_dict()
        assert [e["src"] for e in data["blacklist"]] == ["10.0.0.1", "203.0.113.66"]
        assert data["chain"]["policy"] == "ACCEPT"
