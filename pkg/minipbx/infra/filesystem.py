"""File system operations abstraction for minipbx.

Atomic writes for persisted state and run artifacts, line appends for the
journals, and workspace root detection for the admin commands.
"""

import os
from pathlib import Path

from minipbx.constants import MINIPBX_DIR


class FileSystem:
    """File system operations abstraction.

    Provides:
    - UTF-8 file reading/writing
    - Atomic file writes (temp + rename)
    - Line-oriented appends
    - Workspace root detection
    """

    def read_file(self, path: str) -> str:
        """Read file as UTF-8 text.

        Raises:
            FileNotFoundError: If file does not exist
            UnicodeDecodeError: If file is not valid UTF-8
        """
        with open(path, encoding="utf-8") as f:
            return f.read()

    def write_file_atomic(self, path: str, content: str) -> None:
        """Write file atomically using temp file + rename.

        The target is never left partially written.

        Raises:
            PermissionError: If file or directory cannot be written
            OSError: If atomic rename fails
        """
        temp_path = path + ".tmp"

        try:
            with open(temp_path, "w", encoding="utf-8", newline="") as f:
                f.write(content)
            os.replace(temp_path, path)
        except Exception:
            if os.path.exists(temp_path):
                os.remove(temp_path)
            raise

    def append_line(self, path: str, line: str) -> None:
        """Append one newline-terminated record."""
        with open(path, "a", encoding="utf-8", newline="") as f:
            f.write(line.rstrip("\n") + "\n")

    def remove_if_exists(self, path: str) -> None:
        if os.path.exists(path):
            os.remove(path)

    def ensure_dir(self, path: str) -> None:
        Path(path).mkdir(parents=True, exist_ok=True)

    def find_workspace_root(self, start_path: str) -> str:
        """Find the workspace root by looking for .minipbx/.

        Walks up from start_path until a directory containing .minipbx/ is
        found.

        Raises:
            FileNotFoundError: If no workspace root is found
        """
        current = Path(start_path).resolve()

        while True:
            if (current / MINIPBX_DIR).is_dir():
                return str(current)
            if current == current.parent:
                break
            current = current.parent

        raise FileNotFoundError("Not in a minipbx workspace (run 'pbxctl init')")
