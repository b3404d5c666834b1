"""Persisted admin state: filter chain, blacklist, tunnels and grants.

The state file is rewritten atomically (temp + rename) on every save so an
interrupted admin command never leaves a half-written chain behind.
"""

import logging
import os
from pathlib import Path

from minipbx.constants import MINIPBX_DIR, STATE_FILE
from minipbx.exceptions import InvalidSettingsError, StateNotFoundError
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.state import PbxState

logger = logging.getLogger(__name__)


class StateManager:
    """Loads, caches and saves the admin state."""

    def __init__(
        self,
        filesystem: FileSystem,
        yaml_io: YAMLSerializer,
        state_path: str,
    ):
        self.fs = filesystem
        self.yaml = yaml_io
        self.state_path = Path(state_path)
        self._state: PbxState | None = None

    @classmethod
    def for_workspace(
        cls,
        filesystem: FileSystem,
        yaml_io: YAMLSerializer,
        state_path: str | None = None,
    ) -> "StateManager":
        """Explicit path if given, otherwise .minipbx/state.yaml of the enclosing workspace.

        Raises:
            StateNotFoundError: No --state given and no workspace found
        """
        if state_path:
            return cls(filesystem, yaml_io, state_path)
        try:
            root = filesystem.find_workspace_root(os.getcwd())
        except FileNotFoundError as e:
            raise StateNotFoundError(str(e)) from e
        return cls(filesystem, yaml_io, str(Path(root) / MINIPBX_DIR / STATE_FILE))

    def load_state(self) -> PbxState:
        """
        Raises:
            StateNotFoundError: If the state file does not exist
            InvalidSettingsError: If it is malformed
        """
        if self._state is not None:
            return self._state
        if not self.state_path.exists():
            raise StateNotFoundError(f"No state file at {self.state_path}")
        try:
            data = self.yaml.load_yaml(self.fs.read_file(str(self.state_path))) or {}
            self._state = PbxState.from_dict(data)
        except Exception as e:
            raise InvalidSettingsError(f"Failed to load state {self.state_path}: {e}") from e
        return self._state

    def save_state(self, state: PbxState) -> None:
        self.state_path.parent.mkdir(parents=True, exist_ok=True)
        self.fs.write_file_atomic(str(self.state_path), self.yaml.dump_yaml(state.to_dict()))
        self._state = state
        logger.debug("state saved to %s", self.state_path)
