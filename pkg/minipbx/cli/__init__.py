"""CLI application for minipbx."""

from minipbx.cli.app import app, console

__all__ = ["app", "console"]
