"""CLI commands for the dial plan."""

import typer

from minipbx.cli.errors import exit_on_error
from minipbx.handlers.plan_handler import PlanHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer

plan_app = typer.Typer(name="plan", help="Dial plan debugging")


@plan_app.command("show")
def plan_show(
    extensions_conf: str = typer.Argument(..., help="extensions.conf"),
    context: str = typer.Option(None, "--context", "-c", help="Only this context"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Compile extensions.conf and print context, exten, priority, operation."""
    handler = PlanHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    with exit_on_error():
        typer.echo(handler.show(extensions_conf, context, format))
