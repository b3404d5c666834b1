"""Unit tests for the infra layer: filesystem, YAML, logging and output."""

import json
import logging

import pytest
from rich.console import Console

from minipbx.domain.pktfilter import default_chain
from minipbx.infra import FileSystem, OutputFormatter, YAMLSerializer, configure_logging
from minipbx.infra.timefmt import iso_timestamp
from minipbx.models.enums import NotificationCategory
from minipbx.models.notification import Notification
from minipbx.models.security import BlacklistEntry
from minipbx.models.state import TunnelLease
from minipbx.runtime.metrics import RunMetrics


class TestFileSystem:
    """Tests for FileSystem."""

    def test_atomic_write_leaves_no_temp(self, tmp_path):
        path = tmp_path / "state.yaml"
        FileSystem().write_file_atomic(str(path), "a: 1\n")
        assert path.read_text() == "a: 1\n"
        assert not (tmp_path / "state.yaml.tmp").exists()

    def test_append_line_terminates(self, tmp_path):
        path = tmp_path / "alerts.log"
        fs = FileSystem()
        fs.append_line(str(path), "one")
        fs.append_line(str(path), "two\n")
        assert path.read_text() == "one\ntwo\n"

    def test_workspace_root_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="pbxctl init"):
            FileSystem().find_workspace_root(str(tmp_path))


class TestYamlAndTime:
    def test_dump_is_block_style(self):
        text = YAMLSerializer().dump_yaml({"rules": [{"proto": "udp", "dport": 5060}]})
        assert text == "rules:\n- proto: udp\n  dport: 5060\n"

    def test_iso_timestamp(self):
        assert iso_timestamp(12.5) == "1970-01-01T00:00:12.500+00:00"


class TestLogging:
    """Tests for configure_logging."""

    def test_handler_not_stacked(self):
        console = Console(file=None, stderr=True)
        configure_logging("INFO", console)
        logger = configure_logging("DEBUG", console)
        assert len(logger.handlers) == 1
        assert logger.level == logging.DEBUG

    def test_unknown_level(self):
        with pytest.raises(ValueError, match="Unknown log level"):
            configure_logging("CHATTY")


class TestOutputFormatter:
    """Tests for OutputFormatter."""

    @pytest.fixture
    def formatter(self):
        return OutputFormatter()

    def test_chain_text(self, formatter):
        text = formatter.format_chain(default_chain(), "text")
        assert text.splitlines()[0] == "-P INPUT ACCEPT"
        assert not text.endswith("\n")

    def test_chain_json(self, formatter):
        data = json.loads(formatter.format_chain(default_chain(), "json"))
        assert data["policy"] == "ACCEPT"
        assert data["rules"][0] == {
            "position": 1,
            "rule": "-p udp --dport 110 -j ACCEPT",
            "proto": "udp",
            "dport": 110,
            "src": None,
            "verdict": "ACCEPT",
        }

    def test_blacklist(self, formatter):
        assert formatter.format_blacklist([], "text") == "No blacklisted sources."
        entry = BlacklistEntry("203.0.113.66", 12.0, "flood", 10)
        assert formatter.format_blacklist([entry], "text") == "203.0.113.66\t12.000\t10\tflood"

    def test_sessions_sorted_by_user(self, formatter):
        leases = [TunnelLease("bob", "192.168.100.11", 2.0), TunnelLease("harish", "192.168.100.10", 1.0)]
        lines = formatter.format_sessions(list(reversed(leases)), "text").splitlines()
        assert lines[0].startswith("bob\t")
        assert formatter.format_sessions([], "text") == "No tunnel sessions."

    def test_check(self, formatter):
        text = formatter.format_check("ivr@127.0.0.1", "SELECT", "school.attendance", False, "text")
        assert text == "ivr@127.0.0.1 SELECT on school.attendance: denied"
        data = json.loads(formatter.format_check("a@b", "SELECT", "x.y", True, "json"))
        assert data["allowed"] is True

    def test_mail(self, formatter):
        mail = Notification("admin@minipbx.local", "blacklisted", "", 5.0, NotificationCategory.ADMIN_ALERT, 1)
        assert formatter.format_mail([mail], "text") == "1\t5.000\tadmin-alert\tadmin@minipbx.local\tblacklisted"
        assert formatter.format_mail([], "text") == "No mail."

    def test_run_report(self, formatter):
        metrics = RunMetrics()
        text = formatter.format_run("happy-call", metrics, None, "text")
        assert text.splitlines()[0] == "scenario happy-call: ok"
        data = json.loads(formatter.format_run("flood", metrics, "assertion failed", "json"))
        assert data["ok"] is False
        assert data["failure"] == "assertion failed"
