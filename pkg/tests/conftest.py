"""Shared fixtures and tier selection for the test suite.

The acceptance tier is selected with the ``LEOCOV_ACCEPTANCE_TIER``
environment variable: ``full`` (default, 50,000 trials, 0.05 CP tolerance,
5% AER tolerance) or ``ci`` (20,000 trials, 0.07 / 7%).
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import pytest

from leocov.params import default_params


@dataclass(frozen=True)
class AcceptanceTier:
    name: str
    trials: int
    cp_tol: float
    aer_rel_tol: float


_TIERS = {
    "full": AcceptanceTier("full", 50_000, 0.05, 0.05),
    "ci": AcceptanceTier("ci", 20_000, 0.07, 0.07),
}


@pytest.fixture(scope="session")
def tier() -> AcceptanceTier:
    name = os.environ.get("LEOCOV_ACCEPTANCE_TIER", "full").strip().lower()
    if name not in _TIERS:
        raise ValueError(
            f"unknown LEOCOV_ACCEPTANCE_TIER {name!r}; expected one of {sorted(_TIERS)}"
        )
    return _TIERS[name]


@pytest.fixture(scope="session")
def params():
    """Library default system parameters (session-wide, immutable)."""
    return default_params()
