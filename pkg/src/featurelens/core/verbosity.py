"""Verbosity levels and console helpers for progress output."""

from __future__ import annotations

from enum import IntEnum
from typing import Union

from rich.console import Console

console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)


class VerbosityLevel(IntEnum):
    """Verbosity levels for library and CLI output."""

    SILENT = 0  # Errors only
    BASIC = 1  # One line per stage
    DETAIL = 2  # Per-epoch / per-round progress (CLI default)
    DEBUG = 3  # Internal state dumps


def should_print(level: int, min_level: int) -> bool:
    """Return True when ``level`` is high enough to emit a ``min_level`` message."""
    return level >= min_level


def normalize_verbose(verbose: Union[bool, int]) -> int:
    """
    Normalize a verbose argument to an int level.

    ``True`` maps to BASIC and ``False`` to SILENT so library callers can pass
    a plain flag.
    """
    if isinstance(verbose, bool):
        return VerbosityLevel.BASIC if verbose else VerbosityLevel.SILENT
    return int(verbose)


def emit(verbose: Union[bool, int], min_level: int, message: str) -> None:
    """Print ``message`` through the shared console if the level allows it."""
    if should_print(normalize_verbose(verbose), min_level):
        console.print(message)


def format_section(header: str, content: str) -> str:
    """
    Format a block of lines under a header.

    Args:
        header: Section header (e.g., "Boosting")
        content: Multi-line content

    Returns:
        Header followed by indented, arrow-prefixed non-empty lines
    """
    lines = [f"{header}:"]
    for line in content.strip().split("\n"):
        if line.strip():
            lines.append(f"  → {line.strip()}")
    return "\n".join(lines)
