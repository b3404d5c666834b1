"""Handler for pbxctl run command."""

import logging

import typer

from minipbx.exceptions import MiniPbxError
from minipbx.handlers.base import BaseHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.runtime.scenario import run_scenario, write_artifacts

logger = logging.getLogger(__name__)


class RunHandler(BaseHandler):
    """Plays one scenario under the virtual clock."""

    def handle(
        self,
        scenario: str,
        out: str | None = None,
        settings_path: str | None = None,
        format: str = "text",
    ) -> tuple[str, int]:
        """Run a scenario and optionally write its artifacts.

        Returns:
            (report, exit code); the exit code is 1 when an assertion failed

        Raises:
            ScenarioParseError: Malformed scenario file
            ConfigParseError: Malformed config file
            ConfigValidationError: Cross-file validation failed
        """
        settings = self.load_settings(settings_path)
        result = run_scenario(scenario, settings, self.fs)
        failure = str(result.failure) if result.failure else None
        report = self.formatter.format_run(result.name, result.metrics, failure, format)
        if out:
            written = write_artifacts(result, out, self.fs)
            logger.info("wrote %d artifact(s) to %s", len(written), out)
            if format != "json":
                report += "\n" + "\n".join(f"Wrote {path}" for path in written)
        return report, result.exit_code


def run_command(
    scenario: str = typer.Argument(..., help="Scenario file to play"),
    out: str = typer.Option(None, "--out", "-o", help="Directory for alert log, journals, metrics and state"),
    settings: str = typer.Option(None, "--settings", help="Settings file (default: workspace or built-in)"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Run a scenario under the virtual clock.

    Exit status is 0 when every assertion holds, 1 on the first failed
    assertion and 2 when the scenario or its configuration is invalid.

    Examples:
        pbxctl run scenarios/flood.scn --out runs/flood
    """
    handler = RunHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    try:
        report, code = handler.handle(scenario, out=out, settings_path=settings, format=format)
    except MiniPbxError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=e.exit_code)
    except FileNotFoundError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=2)
    typer.echo(report)
    if code:
        raise typer.Exit(code=code)
