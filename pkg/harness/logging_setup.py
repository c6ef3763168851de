"""
Console Logging
Rich handler on the root logger; library modules only call logging.getLogger
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

from config import LOG_LEVEL

# Status output goes to stderr so stdout stays machine-readable
console = Console(stderr=True)


def configure_logging(level: str = LOG_LEVEL) -> None:
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.addHandler(RichHandler(console=console, show_path=False, rich_tracebacks=True))
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
