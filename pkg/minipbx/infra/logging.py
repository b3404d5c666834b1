"""Logging setup for the pbxctl CLI."""

import logging

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "minipbx"


def configure_logging(level: str = "WARNING", console: Console | None = None) -> logging.Logger:
    """Install a RichHandler on the package logger.

    Calling it again replaces the handler instead of stacking another one.

    Args:
        level: Level name (DEBUG, INFO, WARNING, ERROR)
        console: Console to log to; stderr when omitted

    Raises:
        ValueError: If the level name is unknown
    """
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")

    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)

    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=False,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(numeric)
    logger.propagate = False
    return logger
