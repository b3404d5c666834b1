"""CLI commands for the IDS/IPS."""

import typer

from minipbx.cli.errors import exit_on_error
from minipbx.handlers.sentinel_handler import SentinelHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer

sentinel_app = typer.Typer(name="sentinel", help="Blacklist status, unblock and alert logs")


def _handler() -> SentinelHandler:
    return SentinelHandler(FileSystem(), YAMLSerializer(), OutputFormatter())


@sentinel_app.command("status")
def sentinel_status(
    state: str = typer.Option(None, "--state", help="Admin state file"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """List blacklisted sources: src, since, level, reason."""
    with exit_on_error():
        typer.echo(_handler().status(state, format))


@sentinel_app.command("unblock")
def sentinel_unblock(
    src: str = typer.Argument(..., help="Blacklisted source address"),
    at: float = typer.Option(0.0, "--at", help="Virtual time stamped on the unblock alert"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
    settings: str = typer.Option(None, "--settings", help="Settings file"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Remove a source from the blacklist and its DROP rule from the chain."""
    with exit_on_error():
        typer.echo(_handler().unblock(src, at, state, settings, format))


@sentinel_app.command("alerts")
def sentinel_alerts(
    log: str = typer.Argument(..., help="alerts.log written by `pbxctl run --out`"),
    min_level: int = typer.Option(0, "--min-level", help="Lowest level to show"),
    src: str = typer.Option(None, "--src", help="Only alerts from this source"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Filter an alert log by level and source."""
    with exit_on_error():
        typer.echo(_handler().alerts(log, min_level, src, format))
