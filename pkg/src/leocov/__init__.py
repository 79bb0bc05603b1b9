"""Coverage and rate analysis for dense IoT uplinks relayed by a LEO shell.

The package pairs closed-form/quadrature analysis (``leocov.analysis``) with a
formula-free Monte Carlo engine (``leocov.montecarlo``) over one shared
parameter set (``leocov.params``), so each side cross-validates the other.
"""
from __future__ import annotations

from .errors import ConfigError, LeocovError, ParameterError, SeriesError, ToleranceError

__all__ = [
    "ConfigError",
    "LeocovError",
    "ParameterError",
    "SeriesError",
    "ToleranceError",
    "__version__",
]

__version__ = "0.1.0"
