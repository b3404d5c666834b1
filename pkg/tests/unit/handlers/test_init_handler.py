"""Unit tests for InitHandler."""

import json
from pathlib import Path

import pytest

from minipbx.constants import MINIPBX_DIR, SETTINGS_FILE, STATE_FILE
from minipbx.handlers.init_handler import InitHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer


class TestInitHandler:
    """Tests for InitHandler."""

    @pytest.fixture
    def handler(self):
        return InitHandler(FileSystem(), YAMLSerializer(), OutputFormatter())

    def test_creates_workspace_files(self, handler, tmp_path):
        result = handler.handle(directory=str(tmp_path))

        workspace = tmp_path / MINIPBX_DIR
        assert (workspace / SETTINGS_FILE).exists()
        assert (workspace / STATE_FILE).exists()
        assert "Workspace initialized with 12 filter rule(s)." in result

    def test_state_holds_default_chain_and_ivr_grant(self, handler, tmp_path):
        handler.handle(directory=str(tmp_path))

        text = (tmp_path / MINIPBX_DIR / STATE_FILE).read_text()
        assert "policy: ACCEPT" in text
        assert "dport: 5060" in text
        assert "ivr" in text
        assert "attendance" in text

    def test_settings_are_defaults(self, handler, tmp_path):
        handler.handle(directory=str(tmp_path))

        text = (tmp_path / MINIPBX_DIR / SETTINGS_FILE).read_text()
        assert "sip_port: 5060" in text
        assert "rate_threshold: 10" in text

    def test_current_directory_used(self, handler, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        handler.handle()
        assert (tmp_path / MINIPBX_DIR).is_dir()

    def test_already_initialized(self, handler, tmp_path):
        handler.handle(directory=str(tmp_path))
        with pytest.raises(FileExistsError, match="already initialized"):
            handler.handle(directory=str(tmp_path))

    def test_force_reinitializes(self, handler, tmp_path):
        handler.handle(directory=str(tmp_path))
        state_path = tmp_path / MINIPBX_DIR / STATE_FILE
        state_path.write_text("chain:\n  policy: DROP\n  rules: []\n")

        handler.handle(directory=str(tmp_path), force=True)
        assert "policy: ACCEPT" in state_path.read_text()

    def test_json_output(self, handler, tmp_path):
        data = json.loads(handler.handle(directory=str(tmp_path), format="json"))
        assert data["status"] == "success"
        assert data["rules"] == 12
        assert [Path(f).name for f in data["files_created"]] == [SETTINGS_FILE, STATE_FILE]
