"""Shared error-to-exit-code mapping for CLI commands."""

from collections.abc import Iterator
from contextlib import contextmanager

import typer

from minipbx.exceptions import MiniPbxError


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Print `Error: ...` to stderr and exit with the error's code.

    MiniPbxError carries its own code; bad arguments and missing files exit 1.
    """
    try:
        yield
    except MiniPbxError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=e.exit_code)
    except (ValueError, FileNotFoundError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1)
