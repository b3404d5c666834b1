"""CLI commands for tunnel sessions."""

import typer

from minipbx.cli.errors import exit_on_error
from minipbx.handlers.vpn_handler import VpnHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer

vpn_app = typer.Typer(name="vpn", help="Tunnel session table")


@vpn_app.command("sessions")
def vpn_sessions(
    state: str = typer.Option(None, "--state", help="Admin state file"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """List sessions: user, leased address, established-at."""
    handler = VpnHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    with exit_on_error():
        typer.echo(handler.sessions(state, format))


@vpn_app.command("kick")
def vpn_kick(
    user: str = typer.Argument(..., help="Tunnel user"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
):
    """Close every session of a user."""
    handler = VpnHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    with exit_on_error():
        typer.echo(handler.kick(user, state))
