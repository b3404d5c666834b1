"""Long-running daemon instances keep bounded state."""

import pytest

from minipbx.constants import DAEMON_HISTORY_LIMIT
from minipbx.handlers.daemon_handler import DaemonHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.enums import Proto
from minipbx.models.packet import Packet
from minipbx.runtime.attacks import register_flood


def register_from(pbx, src: str, at: float) -> None:
    datagram = register_flood(src, pbx.settings.server_address, 1, 0.0, user="harish")[0]
    pbx.clock.run_until(at)
    pbx.dispatch(Packet(src, Proto.UDP, datagram.dport, datagram.payload, arrival=at, sport=datagram.sport))


class TestDaemonRetention:
    """A stream of one-off sources must not grow the daemon without bound."""

    @pytest.fixture
    def pbx(self, tmp_path, monkeypatch, config_paths):
        monkeypatch.chdir(tmp_path)
        pbx = DaemonHandler(FileSystem(), YAMLSerializer(), OutputFormatter()).build(config_paths)
        pbx.start()
        return pbx

    def test_logs_capped(self, pbx):
        for n in range(2 * DAEMON_HISTORY_LIMIT):
            register_from(pbx, f"198.51.{n // 250}.{n % 250 + 1}", n * 0.5)
        assert len(pbx.sentinel.alerts) == DAEMON_HISTORY_LIMIT
        assert len(pbx.pipeline.deliveries) == DAEMON_HISTORY_LIMIT
        assert len(pbx.registrar.issued) == DAEMON_HISTORY_LIMIT

    def test_idle_state_expires(self, pbx):
        for n in range(300):
            register_from(pbx, f"198.51.{n // 250}.{n % 250 + 1}", n * 0.5)
        assert pbx.registrar.outstanding == 300
        assert pbx.sentinel.detector.tracked_sources > 1

        later = 150.0 + pbx.settings.registration_expiry
        register_from(pbx, "203.0.113.9", later)
        assert pbx.registrar.outstanding == 1
        assert pbx.sentinel.detector.tracked_sources == 1
