"""
Terminal styles for text reports.
"""

import sys
from typing import TextIO

COLORS = {
    "black": "\033[30m",
    "red": "\033[31m",
    "green": "\033[32m",
    "yellow": "\033[33m",
    "blue": "\033[34m",
    "magenta": "\033[35m",
    "cyan": "\033[36m",
    "white": "\033[37m",
    "end": "\033[0m",
    "bold": "\033[1m",
    "underline": "\033[4m",
}

VERDICT_COLORS = {
    "yes": "green",
    "no": "red",
    "unknown": "yellow",
}

_enabled = False


def apply_styles(stream: TextIO = sys.stdout, enabled: bool = None):
    """Enable ANSI colors when writing to a terminal (or when forced)."""
    global _enabled
    _enabled = stream.isatty() if enabled is None else enabled


def colorstr(*input) -> str:
    """Colors a string using ANSI escape codes, e.g. colorstr('blue', 'hello world')."""
    *args, string = input if len(input) > 1 else ("blue", "bold", input[0])
    if not _enabled:
        return string
    return "".join(COLORS[x] for x in args) + f"{string}" + COLORS["end"]
