"""Engine settings management."""

from pathlib import Path

from minipbx.constants import MINIPBX_DIR, SETTINGS_FILE
from minipbx.exceptions import InvalidSettingsError
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.config import Settings


class SettingsManager:
    """Loads and saves .minipbx/config.yaml (or an explicit settings path)."""

    def __init__(
        self,
        filesystem: FileSystem,
        yaml_io: YAMLSerializer,
        workspace_root: str | None = None,
        settings_path: str | None = None,
    ):
        """Initialize SettingsManager.

        Args:
            filesystem: File system abstraction
            yaml_io: YAML serialization handler
            workspace_root: Directory holding .minipbx/
            settings_path: Explicit settings file, overriding the workspace one
        """
        self.fs = filesystem
        self.yaml = yaml_io
        if settings_path:
            self.settings_path = Path(settings_path)
        else:
            self.settings_path = Path(workspace_root or ".") / MINIPBX_DIR / SETTINGS_FILE

    def load_settings(self) -> Settings:
        """Load settings, defaults when the file does not exist.

        Raises:
            InvalidSettingsError: If the file is malformed
        """
        if not self.settings_path.exists():
            return Settings.get_default()

        try:
            content = self.fs.read_file(str(self.settings_path))
            data = self.yaml.load_yaml(content) or {}
            if not isinstance(data, dict):
                raise ValueError("top level must be a mapping")
            return Settings.from_dict(dict(data))
        except Exception as e:
            raise InvalidSettingsError(f"Failed to load settings {self.settings_path}: {e}") from e

    def save_settings(self, settings: Settings) -> None:
        content = self.yaml.dump_yaml(settings.to_dict())
        self.settings_path.parent.mkdir(parents=True, exist_ok=True)
        self.fs.write_file_atomic(str(self.settings_path), content)
