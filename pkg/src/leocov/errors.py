"""Exception hierarchy for the leocov package.

All library errors derive from :class:`LeocovError` so callers can catch
everything from this package with a single handler.  Domain/validation
problems additionally derive from :class:`ValueError`, and numerical
failures from :class:`RuntimeError`, so generic handlers keep working.
"""
from __future__ import annotations

__all__ = [
    "LeocovError",
    "ParameterError",
    "ConfigError",
    "ToleranceError",
    "SeriesError",
]


class LeocovError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LeocovError, ValueError):
    """A function argument or model parameter is outside its domain."""


class ConfigError(LeocovError, ValueError):
    """An experiment configuration file or override is invalid."""


class ToleranceError(LeocovError, RuntimeError):
    """A numerical routine could not reach the requested tolerance.

    Carries the best estimate obtained so far and its error bound so the
    caller can decide whether the partial result is still useful.
    """

    def __init__(self, message: str, best_estimate: float, error_bound: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_bound = error_bound


class SeriesError(LeocovError, RuntimeError):
    """A series did not converge within the allowed number of terms."""

    def __init__(self, message: str, best_estimate: float | None = None, terms_used: int = 0):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.terms_used = terms_used
