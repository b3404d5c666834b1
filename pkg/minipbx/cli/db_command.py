"""CLI commands for database access control."""

import typer

from minipbx.cli.errors import exit_on_error
from minipbx.handlers.db_handler import DbHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer

db_app = typer.Typer(name="db", help="GRANT/REVOKE and attendance lookups")


def _handler() -> DbHandler:
    return DbHandler(FileSystem(), YAMLSerializer(), OutputFormatter())


@db_app.command("grant")
def db_grant(
    statement: str = typer.Argument(..., help="GRANT ... ON db.tbl TO 'user'@host [IDENTIFIED BY 'pw']"),
    acting_as: str = typer.Option(None, "--as", help="Issue as user@host (needs GRANT OPTION)"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
):
    """Apply a GRANT statement.

    Examples:
        pbxctl db grant "GRANT SELECT ON school.attendance TO 'ivr'@'127.0.0.1'"
    """
    with exit_on_error():
        typer.echo(_handler().grant(statement, acting_as, state))


@db_app.command("revoke")
def db_revoke(
    statement: str = typer.Argument(..., help="REVOKE ... ON db.tbl FROM 'user'@host"),
    acting_as: str = typer.Option(None, "--as", help="Issue as user@host (needs GRANT OPTION)"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
):
    """Apply a REVOKE statement. Revoking what was never granted only warns."""
    with exit_on_error():
        typer.echo(_handler().revoke(statement, acting_as, state))


@db_app.command("check")
def db_check(
    principal: str = typer.Argument(..., help="user@host"),
    privilege: str = typer.Argument(..., help="Privilege name, e.g. SELECT"),
    obj: str = typer.Argument(..., help="db.tbl"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Whether a principal holds a privilege. Exit status 1 when denied."""
    with exit_on_error():
        report, allowed = _handler().check(principal, privilege, obj, state, format)
    typer.echo(report)
    if not allowed:
        raise typer.Exit(code=1)


@db_app.command("query")
def db_query(
    student_id: str = typer.Argument(..., help="Student id"),
    attendance_db: str = typer.Option(..., "--attendance-db", help="Attendance store (id, md5, percent TSV)"),
    acting_as: str = typer.Option(None, "--as", help="Query as user@host (default: the IVR principal)"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
    settings: str = typer.Option(None, "--settings", help="Settings file"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Read one student's attendance through the privilege check."""
    with exit_on_error():
        typer.echo(_handler().query(student_id, attendance_db, acting_as, state, settings, format))
