"""CLI commands for the notification journal."""

import typer

from minipbx.cli.errors import exit_on_error
from minipbx.handlers.mail_handler import MailHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer

mail_app = typer.Typer(name="mail", help="Admin alerts and voicemail notices")


@mail_app.command("list")
def mail_list(
    journal: str = typer.Argument(..., help="mail.mbox written by `pbxctl run --out`"),
    category: str = typer.Option(None, "--category", help="admin-alert or voicemail-notice"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """List mail: receipt, time, category, recipient, subject."""
    handler = MailHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    with exit_on_error():
        typer.echo(handler.list_mail(journal, category, format))
