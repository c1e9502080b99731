"""Logging utilities for the quadrature-domain toolkit.

Console lines go to stderr so that JSON written to stdout stays
byte-for-byte reproducible.
"""

from __future__ import annotations

import os
import sys
from datetime import datetime
from pathlib import Path
from typing import TYPE_CHECKING

import pytz
from colorama import Fore, Style, just_fix_windows_console

if TYPE_CHECKING:
    from pytz.tzinfo import BaseTzInfo

# Enable ANSI colors on Windows
just_fix_windows_console()


# Default timezone for timestamps (override with QD_LOG_TZ)
DEFAULT_TZ: BaseTzInfo = pytz.timezone(os.environ.get("QD_LOG_TZ", "UTC"))

# Optional mirror file, set by the CLI via set_log_file()
_LOG_FILE: Path | None = None


def _stamp(tz: BaseTzInfo | None) -> str:
    tz = tz or DEFAULT_TZ
    return datetime.now(tz).strftime("%Y-%m-%d %H:%M:%S")


def _emit(line: str, color: str = "") -> None:
    if color:
        print(f"{color}{line}{Style.RESET_ALL}", file=sys.stderr)
    else:
        print(line, file=sys.stderr)
    if _LOG_FILE is not None:
        _append(_LOG_FILE, line)


def set_log_file(filepath: str | Path | None) -> None:
    """Mirror every console line into `filepath` (None disables)."""
    global _LOG_FILE
    _LOG_FILE = Path(filepath) if filepath else None


def log(message: str, tz: BaseTzInfo | None = None) -> None:
    """Print console messages with a local timestamp."""
    _emit(f"[{_stamp(tz)}] {message}")


def log_warn(message: str, tz: BaseTzInfo | None = None) -> None:
    """Print a warning in YELLOW with a local timestamp."""
    _emit(f"[{_stamp(tz)}] {message}", Fore.YELLOW)


def log_error(message: str, tz: BaseTzInfo | None = None) -> None:
    """Print an error in RED with a local timestamp."""
    _emit(f"[{_stamp(tz)}] {message}", Fore.RED)


def _append(path: Path, line: str) -> None:
    try:
        with open(path, "a", encoding="utf-8") as f:
            f.write(line + "\n")
    except Exception:
        pass


def log_to_file(
    filepath: str | Path,
    message: str,
    *,
    tz: BaseTzInfo | None = None,
    create_parents: bool = True,
) -> None:
    """Append a timestamped message to a file."""
    path = Path(filepath)
    try:
        if create_parents:
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as f:
            f.write(f"[{_stamp(tz)}] {message}\n")
    except Exception as e:
        # Logging must never break a computation
        try:
            print(f"[{_stamp(tz)}] log write failed: {e} | path={filepath}", file=sys.stderr)
        except Exception:
            pass
