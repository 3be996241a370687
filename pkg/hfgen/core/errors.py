"""
Exception hierarchy shared by the numerical core and the CLI.
"""
from typing import Optional


class HFGenError(Exception):
    """Base class for every error raised by hfgen."""


class ConfigError(HFGenError):
    """Invalid experiment configuration (CLI exit code 2)."""


class GridError(HFGenError, ValueError):
    pass


class ParameterError(HFGenError, ValueError):
    pass


class UnsupportedModelError(HFGenError):
    pass


class NumericalError(HFGenError):
    """
    A numerical failure tied to a parameter value and a mode.

    `lam` and `n` are optional so the same class serves failures that happen
    before a mode is known.
    """

    def __init__(self, message: str, lam: Optional[float] = None, n: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.lam = lam
        self.n = n

    def __str__(self) -> str:
        where = []
        if self.lam is not None:
            where.append(f"lambda={self.lam!r}")
        if self.n is not None:
            where.append(f"n={self.n}")
        if not where:
            return self.message
        return f"{self.message} ({', '.join(where)})"


class DegeneracyError(NumericalError):
    pass


class ModeTrackingError(NumericalError):
    pass


class PhaseAlignmentError(NumericalError):
    pass


class EigensolverError(NumericalError):
    pass
