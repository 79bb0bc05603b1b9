"""Experiment configuration: unit conversions, YAML loading, and the bridge
from flat config keys to :class:`~leocov.params.SystemParams`."""
from __future__ import annotations

__all__ = [
    "db_to_linear",
    "dbm_to_watts",
]


def db_to_linear(value_db: float) -> float:
    """Convert a decibel ratio to the linear scale."""
    return 10.0 ** (value_db / 10.0)


def dbm_to_watts(value_dbm: float) -> float:
    """Convert a power in dBm to watts."""
    return 10.0 ** ((value_dbm - 30.0) / 10.0)
