"""Shared fixtures for handler tests: an initialized workspace."""

import pytest

from minipbx.constants import MINIPBX_DIR, STATE_FILE
from minipbx.handlers.init_handler import InitHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer


@pytest.fixture
def services():
    return FileSystem(), YAMLSerializer(), OutputFormatter()


@pytest.fixture
def workspace(tmp_path, monkeypatch, services):
    """Initialized workspace as the current directory."""
    InitHandler(*services).handle(directory=str(tmp_path))
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def state_path(workspace):
    return str(workspace / MINIPBX_DIR / STATE_FILE)
