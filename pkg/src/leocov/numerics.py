"""Special functions, quadrature, and series summation.

Thin, contract-enforcing wrappers around SciPy's well-tested kernels:
domain checks raise :class:`~leocov.errors.ParameterError`, quadrature
failures raise :class:`~leocov.errors.ToleranceError` carrying the best
estimate, and series summation reports how many leading terms mattered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import scipy.integrate
import scipy.special

from .errors import ParameterError, SeriesError, ToleranceError

__all__ = [
    "QuadratureSpec",
    "SeriesSpec",
    "SeriesResult",
    "ln_gamma",
    "lower_incomplete_gamma",
    "pochhammer",
    "kummer_1f1",
    "integrate",
    "integrate_with_bound",
    "integrate_semi_infinite",
    "integrate_semi_infinite_with_bound",
    "sum_series",
    "kahan_sum",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and effort budget for adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol >= 0.0):
            raise ParameterError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if not (self.rel_tol >= 0.0):
            raise ParameterError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.abs_tol == 0.0 and self.rel_tol == 0.0:
            raise ParameterError("abs_tol and rel_tol cannot both be zero")
        if not isinstance(self.max_subdivisions, int) or self.max_subdivisions < 1:
            raise ParameterError(
                f"max_subdivisions must be a positive integer, got {self.max_subdivisions}"
            )


@dataclass(frozen=True)
class SeriesSpec:
    """Stopping rule for term-by-term series summation."""

    rel_tail_tol: float = 1e-9
    max_terms: int = 200
    consecutive_small_terms: int = 3

    def __post_init__(self):
        if not (self.rel_tail_tol > 0.0):
            raise ParameterError(f"rel_tail_tol must be > 0, got {self.rel_tail_tol}")
        if not isinstance(self.max_terms, int) or self.max_terms < 1:
            raise ParameterError(f"max_terms must be a positive integer, got {self.max_terms}")
        if (
            not isinstance(self.consecutive_small_terms, int)
            or self.consecutive_small_terms < 1
        ):
            raise ParameterError(
                "consecutive_small_terms must be a positive integer, "
                f"got {self.consecutive_small_terms}"
            )


@dataclass(frozen=True)
class SeriesResult:
    """Value of a summed series and the number of leading terms that mattered."""

    value: float
    terms_used: int


DEFAULT_QUADRATURE = QuadratureSpec()
DEFAULT_SERIES = SeriesSpec()


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not (x > 0.0):
        raise ParameterError(f"ln_gamma requires x > 0, got {x}")
    return float(scipy.special.gammaln(x))


def lower_incomplete_gamma(a: float, x: float) -> float:
    """Unnormalized lower incomplete gamma integral on [0, x], a > 0, x >= 0."""
    if not (a > 0.0):
        raise ParameterError(f"lower_incomplete_gamma requires a > 0, got {a}")
    if not (x >= 0.0):
        raise ParameterError(f"lower_incomplete_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return float(math.exp(scipy.special.gammaln(a)) * scipy.special.gammainc(a, x))


def pochhammer(x: float, n: int) -> float:
    """Rising factorial x (x+1) ... (x+n-1); exact product, (x)_0 = 1."""
    if not isinstance(n, int) or n < 0:
        raise ParameterError(f"pochhammer order must be a nonnegative integer, got {n}")
    result = 1.0
    for k in range(n):
        result *= x + k
    return result


def kummer_1f1(a: float, b: float, x: float) -> float:
    """Confluent hypergeometric function 1F1(a; b; x)."""
    if b <= 0.0 and b == math.floor(b):
        raise ParameterError(f"kummer_1f1 undefined for nonpositive integer b, got {b}")
    value = float(scipy.special.hyp1f1(a, b, x))
    if not math.isfinite(value):
        raise ToleranceError(
            f"kummer_1f1({a}, {b}, {x}) did not evaluate to a finite value",
            value,
            math.inf,
        )
    return value


def _run_quad(f, lo, hi, spec: QuadratureSpec) -> tuple[float, float]:
    out = scipy.integrate.quad(
        f,
        lo,
        hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, error_bound = float(out[0]), float(out[1])
    if len(out) > 3:
        raise ToleranceError(
            f"quadrature did not reach the requested tolerance: {out[3]}",
            value,
            error_bound,
        )
    return value, error_bound


def integrate_with_bound(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
) -> tuple[float, float]:
    """Adaptive quadrature of ``f`` on [lo, hi]; returns (value, error bound)."""
    spec = spec or DEFAULT_QUADRATURE
    if lo > hi:
        raise ParameterError(f"reversed integration interval [{lo}, {hi}]")
    if lo == hi:
        return 0.0, 0.0
    return _run_quad(f, lo, hi, spec)


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Adaptive quadrature of ``f`` on the finite interval [lo, hi]."""
    return integrate_with_bound(f, lo, hi, spec)[0]


def integrate_semi_infinite_with_bound(
    f: Callable[[float], float], spec: QuadratureSpec | None = None
) -> tuple[float, float]:
    """Adaptive quadrature of ``f`` on [0, inf); returns (value, error bound)."""
    spec = spec or DEFAULT_QUADRATURE
    return _run_quad(f, 0.0, math.inf, spec)


def integrate_semi_infinite(
    f: Callable[[float], float], spec: QuadratureSpec | None = None
) -> float:
    """Adaptive quadrature of ``f`` on the half line [0, inf)."""
    return integrate_semi_infinite_with_bound(f, spec)[0]


def sum_series(
    term: Callable[[int], float], spec: SeriesSpec | None = None
) -> SeriesResult:
    """Sum ``term(0) + term(1) + ...`` until the tail is negligible.

    Stops once ``consecutive_small_terms`` successive terms fall below
    ``rel_tail_tol`` relative to the running sum.  ``terms_used`` counts the
    leading terms that actually contributed (trailing negligible terms are
    excluded), which lets callers report the effective truncation order.
    """
    spec = spec or DEFAULT_SERIES
    total = 0.0
    compensation = 0.0
    small_run = 0
    last_significant = -1
    for k in range(spec.max_terms):
        t_k = float(term(k))
        # Neumaier-compensated accumulation.
        new_total = total + t_k
        if abs(total) >= abs(t_k):
            compensation += (total - new_total) + t_k
        else:
            compensation += (t_k - new_total) + total
        total = new_total
        threshold = spec.rel_tail_tol * max(abs(total + compensation), 1e-300)
        if abs(t_k) <= threshold:
            small_run += 1
            if small_run >= spec.consecutive_small_terms:
                return SeriesResult(total + compensation, last_significant + 1)
        else:
            small_run = 0
            last_significant = k
    raise SeriesError(
        f"series did not converge within {spec.max_terms} terms",
        best_estimate=total + compensation,
        terms_used=spec.max_terms,
    )


def kahan_sum(values: Iterable[float]) -> float:
    """Compensated (Neumaier) summation of a sequence of floats."""
    total = 0.0
    compensation = 0.0
    for v in values:
        v = float(v)
        new_total = total + v
        if abs(total) >= abs(v):
            compensation += (total - new_total) + v
        else:
            compensation += (v - new_total) + total
        total = new_total
    return total + compensation
