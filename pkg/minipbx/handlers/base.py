"""Base handler with common functionality."""

import os

from minipbx.domain.config.manager import SettingsManager
from minipbx.domain.state import StateManager
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.config import Settings


class BaseHandler:
    """Base class for command handlers.

    Gives every handler the infrastructure services plus workspace
    discovery for settings and persisted admin state.
    """

    def __init__(
        self,
        filesystem: FileSystem,
        yaml_io: YAMLSerializer,
        output_formatter: OutputFormatter,
    ):
        """Initialize base handler.

        Args:
            filesystem: File system abstraction
            yaml_io: YAML serialization
            output_formatter: Output formatting
        """
        self.fs = filesystem
        self.yaml = yaml_io
        self.formatter = output_formatter

    def state_manager(self, state_path: str | None = None) -> StateManager:
        """
        Raises:
            StateNotFoundError: No --state given and not inside a workspace
        """
        return StateManager.for_workspace(self.fs, self.yaml, state_path)

    def load_settings(self, settings_path: str | None = None) -> Settings:
        """Explicit file, else the enclosing workspace's, else defaults.

        Raises:
            InvalidSettingsError: If the chosen file is malformed
        """
        if settings_path:
            return SettingsManager(self.fs, self.yaml, settings_path=settings_path).load_settings()
        try:
            root = self.fs.find_workspace_root(os.getcwd())
        except FileNotFoundError:
            return Settings.get_default()
        return SettingsManager(self.fs, self.yaml, workspace_root=root).load_settings()
