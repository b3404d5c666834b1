"""Infrastructure layer for minipbx.

- File system operations
- YAML serialization
- Output formatting
- CLI logging setup
"""

from .filesystem import FileSystem
from .yaml_io import YAMLSerializer
from .output import OutputFormatter
from .logging import configure_logging

__all__ = ["FileSystem", "YAMLSerializer", "OutputFormatter", "configure_logging"]
