"""Integration tests: the bundled scenarios end to end under the virtual clock."""

import pytest

from minipbx.exceptions import ConfigValidationError
from minipbx.runtime import run_scenario, write_artifacts

BUNDLED = ["happy-call", "no-answer", "flood", "ivr", "brute-force", "port-scan", "vpn"]


def scenario_header(config_dir, *extra: str) -> str:
    lines = [
        f"CONFIG sip {config_dir / 'sip.conf'}",
        f"CONFIG extensions {config_dir / 'extensions.conf'}",
        f"CONFIG voicemail {config_dir / 'voicemail.conf'}",
        *extra,
    ]
    return "\n".join(lines) + "\n"


class TestBundledScenarios:
    """Every shipped scenario passes its own assertions."""

    @pytest.mark.parametrize("name", BUNDLED)
    def test_scenario_passes(self, scenario_dir, name):
        result = run_scenario(str(scenario_dir / f"{name}.scn"))
        assert result.failure is None, str(result.failure)
        assert result.exit_code == 0
        assert result.name == name
        assert result.metrics.conserved

    def test_flood_blacklists_only_the_attacker(self, scenario_dir):
        result = run_scenario(str(scenario_dir / "flood.scn"))
        blacklist = result.pbx.sentinel.responder.blacklist
        assert "203.0.113.66" in blacklist.entries
        assert result.metrics.registrations_ok >= 2
        assert result.metrics.packets_dropped > 0
        assert result.alert_lines
        assert all(int(line.split("\t")[1]) >= 8 for line in result.alert_lines)
        assert result.pbx.packet_filter.rules[0].src == "203.0.113.66"

    def test_no_answer_leaves_voicemail_for_bob(self, scenario_dir):
        result = run_scenario(str(scenario_dir / "no-answer.scn"))
        journal = result.pbx.mailboxes.journal_lines()
        assert len(journal) == 1
        assert "757@vmail" in journal[0]

    def test_vpn_lease_from_pool(self, scenario_dir):
        result = run_scenario(str(scenario_dir / "vpn.scn"))
        leases = result.pbx.to_state().tunnels
        assert [lease.user for lease in leases] == ["harish"]

    def test_vpn_signalling_sealed_on_the_wire(self, scenario_dir):
        wire = run_scenario(str(scenario_dir / "vpn.scn")).pbx.tunnel.wire
        assert {record.direction for record in wire} == {"in", "out"}
        assert not any(b"REGISTER" in record.octets or b"SIP/2.0" in record.octets for record in wire)

    def test_finished_calls_leave_no_live_sessions(self, scenario_dir):
        pbx = run_scenario(str(scenario_dir / "happy-call.scn")).pbx
        assert pbx.switchboard.sessions == {}
        assert pbx.switchboard.channels == {}
        assert pbx.metrics.calls_completed == 1

    def test_simulation_keeps_full_history(self, scenario_dir):
        pbx = run_scenario(str(scenario_dir / "flood.scn")).pbx
        assert pbx.sentinel.alerts.maxlen is None
        assert pbx.pipeline.deliveries.maxlen is None

    def test_port_scan_stops_reaching_services(self, scenario_dir):
        metrics = run_scenario(str(scenario_dir / "port-scan.scn")).metrics
        assert metrics.packets_dropped > 0
        assert metrics.packets_accepted + metrics.packets_dropped + metrics.packets_rejected == 1024


class TestDeterminism:
    """Two runs of the same scenario produce byte-identical artifacts."""

    @pytest.mark.parametrize("name", BUNDLED)
    def test_artifacts_identical(self, scenario_dir, tmp_path, name):
        first = write_artifacts(run_scenario(str(scenario_dir / f"{name}.scn")), str(tmp_path / "a"))
        second = write_artifacts(run_scenario(str(scenario_dir / f"{name}.scn")), str(tmp_path / "b"))
        assert len(first) == 5
        for left, right in zip(first, second):
            with open(left, "rb") as a, open(right, "rb") as b:
                assert a.read() == b.read(), left


class TestFailingRuns:
    """Assertion failures and bad configs surface with the right exit codes."""

    def test_failed_assertion(self, tmp_path, config_dir):
        path = tmp_path / "wrong.scn"
        path.write_text(
            scenario_header(config_dir, "PHONE harish 192.168.100.50 5060")
            + "AT 0 register harish\n"
            + "AT 1 assert calls_completed == 5\n"
            + "AT 2 assert registered nobody\n"
        )
        result = run_scenario(str(path))
        assert result.exit_code == 1
        assert result.failure.line == 6
        assert "calls_completed is 0" in str(result.failure)

    def test_unknown_phone_fails_the_step(self, tmp_path, config_dir):
        path = tmp_path / "ghost.scn"
        path.write_text(scenario_header(config_dir) + "AT 0 register ghost\n")
        result = run_scenario(str(path))
        assert result.exit_code == 1
        assert "no PHONE declared" in str(result.failure)

    def test_invalid_configs_stop_before_any_step(self, tmp_path, config_dir):
        broken = tmp_path / "voicemail.conf"
        broken.write_text("[vmail]\n999 => 1,x,x@y\n")
        path = tmp_path / "broken.scn"
        path.write_text(
            scenario_header(config_dir).replace(str(config_dir / "voicemail.conf"), str(broken))
            + "AT 0 assert calls_completed == 0\n"
        )
        with pytest.raises(ConfigValidationError) as exc_info:
            run_scenario(str(path))
        assert exc_info.value.exit_code == 2
