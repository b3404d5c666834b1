"""Engine settings."""

from .manager import SettingsManager

__all__ = ["SettingsManager"]
