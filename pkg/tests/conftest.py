"""Shared fixtures: bundled scenarios and configuration files."""

from pathlib import Path

import pytest

from minipbx.domain.confkit import ConfigPaths

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "minipbx" / "scenarios"
CONFIG_DIR = SCENARIO_DIR / "configs"


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR


@pytest.fixture
def config_dir() -> Path:
    return CONFIG_DIR


@pytest.fixture
def config_paths() -> ConfigPaths:
    """The bundled office/school deployment, tunnel files included."""
    return ConfigPaths(
        sip=str(CONFIG_DIR / "sip.conf"),
        extensions=str(CONFIG_DIR / "extensions.conf"),
        voicemail=str(CONFIG_DIR / "voicemail.conf"),
        pptpd=str(CONFIG_DIR / "pptpd.conf"),
        chap=str(CONFIG_DIR / "chap-secrets"),
    )
