"""Handler for pbxctl init command."""

import json
import os
from pathlib import Path

import typer

from minipbx.constants import MINIPBX_DIR, SETTINGS_FILE, STATE_FILE
from minipbx.domain.config.manager import SettingsManager
from minipbx.domain.state import StateManager
from minipbx.exceptions import MiniPbxError
from minipbx.handlers.base import BaseHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.config import Settings
from minipbx.runtime.bootstrap import fresh_state


class InitHandler(BaseHandler):
    """Handler for pbxctl init command.

    Creates .minipbx/ holding default settings and an admin state whose
    INPUT chain is the deployment policy.
    """

    def handle(self, directory: str | None = None, force: bool = False, format: str = "text") -> str:
        """Initialize a minipbx workspace.

        Raises:
            FileExistsError: If .minipbx/ already exists and force=False
        """
        target_dir = Path(directory) if directory else Path(os.getcwd())
        target_dir = target_dir.resolve()

        workspace_dir = target_dir / MINIPBX_DIR
        if workspace_dir.exists() and not force:
            raise FileExistsError(
                f"minipbx already initialized in {target_dir}. Use --force to reinitialize."
            )
        workspace_dir.mkdir(parents=True, exist_ok=True)

        settings = Settings.get_default()
        SettingsManager(self.fs, self.yaml, workspace_root=str(target_dir)).save_settings(settings)
        state = fresh_state(settings)
        StateManager(self.fs, self.yaml, str(workspace_dir / STATE_FILE)).save_state(state)

        created_files = [workspace_dir / SETTINGS_FILE, workspace_dir / STATE_FILE]
        if format == "json":
            return json.dumps(
                {
                    "status": "success",
                    "directory": str(target_dir),
                    "files_created": [str(f) for f in created_files],
                    "rules": len(state.rules),
                },
                indent=2,
            )
        lines = [f"Created {f}" for f in created_files]
        lines.append(f"Workspace initialized with {len(state.rules)} filter rule(s).")
        return "\n".join(lines)


def init_command(
    directory: str = typer.Argument(None, help="Directory to initialize (default: current directory)"),
    force: bool = typer.Option(False, "--force", "-f", help="Overwrite existing workspace"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Initialize a minipbx workspace.

    Creates .minipbx/config.yaml with default settings and
    .minipbx/state.yaml with the default firewall chain.
    """
    handler = InitHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    try:
        typer.echo(handler.handle(directory=directory, force=force, format=format))
    except FileExistsError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1)
    except MiniPbxError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=e.exit_code)
