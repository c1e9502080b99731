"""errors.py

Exception hierarchy shared by every module.

Each class carries the process exit code the CLI returns when it escapes:
- 2  malformed input (bad map JSON, out-of-range arguments)
- 3  numeric failure (root finding, univalence, fits, ...)
- 4  unknown catalog entry
- 5  output path not writable
"""

from __future__ import annotations

__all__ = [
    "QDError",
    "InvalidInput",
    "UnknownCatalogEntry",
    "OutputNotWritable",
    "NumericFailure",
    "RootFindingFailure",
    "UnivalenceViolation",
    "AmbiguousBand",
    "OutsideDomain",
    "HigherOrderCircleCritical",
    "NewtonDivergence",
    "FitUnstable",
    "LeftNumericRange",
    "BadBracket",
    "NotATree",
    "InsideFundamentalDomain",
]


class QDError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code: int = 3


class InvalidInput(QDError, ValueError):
    exit_code = 2


class UnknownCatalogEntry(QDError, KeyError):
    exit_code = 4

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown catalog entry"


class OutputNotWritable(QDError, OSError):
    exit_code = 5


class NumericFailure(QDError, ArithmeticError):
    exit_code = 3


class RootFindingFailure(NumericFailure):
    pass


class UnivalenceViolation(NumericFailure):
    """The map is not injective on the closed exterior disk."""


class AmbiguousBand(NumericFailure):
    """A preimage sits in the boundary band while another lies outside it."""


class OutsideDomain(NumericFailure):
    """Schwarz reflection requested at a droplet-interior point."""


class HigherOrderCircleCritical(NumericFailure):
    pass


class NewtonDivergence(NumericFailure):
    pass


class FitUnstable(NumericFailure):
    def __init__(self, message: str, slope: float = float("nan"), residual: float = float("nan")):
        super().__init__(message)
        self.slope = slope
        self.residual = residual


class LeftNumericRange(NumericFailure):
    pass


class BadBracket(NumericFailure):
    pass


class NotATree(NumericFailure):
    pass


class InsideFundamentalDomain(NumericFailure):
    pass
