"""Main Typer application."""

import typer
from rich.console import Console

from minipbx.infra.logging import configure_logging

app = typer.Typer(
    name="pbxctl",
    help="Desk-scale secure PBX: scenarios, daemon and admin commands",
)

console = Console()


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(False, "--version", "-v", is_flag=True, help="Show version"),
    log_level: str = typer.Option("WARNING", "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    """pbxctl - run, serve and administer a minipbx instance.

    `run` plays a scenario under the virtual clock, `daemon` serves real
    UDP sockets, and the fw/sentinel/vpn/db/mail groups inspect or change
    the persisted admin state.
    """
    if version:
        from minipbx import __version__
        console.print(f"pbxctl version {__version__}")
        raise typer.Exit()

    try:
        configure_logging(log_level)
    except ValueError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=2)

    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())
        raise typer.Exit()
