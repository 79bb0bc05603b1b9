"""Link-distance distributions induced by uniform placement on spheres.

Every law here descends from one geometric fact: for a point uniform on a
sphere of radius ``a`` and a fixed point at radius ``b`` from the center, the
squared separation is uniform on ``[(a - b)^2, (a + b)^2]``.  The derived
laws (nearest of N, interferer truncated to the served cap) stay closed-form,
so each exposes an exact ``cdf``, ``pdf``, and ``inverse_cdf``.

All distances are kilometers; every method accepts floats or numpy arrays.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .geometry import (
    CapSpec,
    SphereModel,
    coverage_cap_cos_theta3,
    max_slant_range,
    satellite_success_prob,
)

__all__ = [
    "DistanceLaw",
    "dist_device_to_satellite",
    "dist_interferer_to_serving_sat",
    "dist_nearest_satellite",
    "dist_satellite_to_ground",
    "dist_target_satellite_to_es",
    "p_zero",
    "sample_distance",
    "sample_uniform_cap",
]


def _validate_probability(u) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ParameterError("inverse_cdf argument must lie in [0, 1]")
    return arr


def _maybe_scalar(value: np.ndarray, like) -> float | np.ndarray:
    if np.isscalar(like) or getattr(like, "ndim", 1) == 0:
        return float(value)
    return value


class DistanceLaw(ABC):
    """A continuous distance distribution with closed-form transforms."""

    @property
    @abstractmethod
    def support_km(self) -> tuple[float, float]:
        """Closed interval carrying all probability mass."""

    @abstractmethod
    def cdf(self, r_km):
        """P(distance <= r); clamps to 0 / 1 outside the support."""

    @abstractmethod
    def pdf(self, r_km):
        """Density at r; zero outside the support."""

    @abstractmethod
    def inverse_cdf(self, u):
        """Quantile function on [0, 1]."""


@dataclass(frozen=True)
class _ShellToPointLaw(DistanceLaw):
    """Distance from a uniform point on a sphere of radius ``shell_radius_km``
    to a fixed point at radius ``point_radius_km``; the squared distance is
    uniform, giving a linear density in r.
    """

    shell_radius_km: float
    point_radius_km: float

    @property
    def _lo(self) -> float:
        return abs(self.shell_radius_km - self.point_radius_km)

    @property
    def _hi(self) -> float:
        return self.shell_radius_km + self.point_radius_km

    @property
    def _span(self) -> float:
        # hi^2 - lo^2 = 4 a b for shell radius a, point radius b.
        return 4.0 * self.shell_radius_km * self.point_radius_km

    @property
    def support_km(self) -> tuple[float, float]:
        return (self._lo, self._hi)

    def cdf(self, r_km):
        r = np.asarray(r_km, dtype=float)
        value = np.clip((r * r - self._lo**2) / self._span, 0.0, 1.0)
        return _maybe_scalar(value, r_km)

    def pdf(self, r_km):
        r = np.asarray(r_km, dtype=float)
        inside = (r >= self._lo) & (r <= self._hi)
        value = np.where(inside, 2.0 * r / self._span, 0.0)
        return _maybe_scalar(value, r_km)

    def inverse_cdf(self, u):
        arr = _validate_probability(u)
        value = np.sqrt(self._lo**2 + arr * self._span)
        return _maybe_scalar(value, u)


@dataclass(frozen=True)
class _NearestOfNLaw(DistanceLaw):
    """Minimum of ``n`` independent draws from a base law."""

    base: DistanceLaw
    n: int

    @property
    def support_km(self) -> tuple[float, float]:
        return self.base.support_km

    def cdf(self, r_km):
        f1 = np.asarray(self.base.cdf(r_km), dtype=float)
        with np.errstate(divide="ignore"):
            value = -np.expm1(self.n * np.log1p(-f1))
        return _maybe_scalar(value, r_km)

    def pdf(self, r_km):
        f1 = np.asarray(self.base.cdf(r_km), dtype=float)
        d1 = np.asarray(self.base.pdf(r_km), dtype=float)
        value = self.n * np.power(1.0 - f1, self.n - 1) * d1
        return _maybe_scalar(value, r_km)

    def inverse_cdf(self, u):
        arr = _validate_probability(u)
        with np.errstate(divide="ignore"):
            f1 = -np.expm1(np.log1p(-arr) / self.n)
        value = np.asarray(self.base.inverse_cdf(f1), dtype=float)
        return _maybe_scalar(value, u)


@dataclass(frozen=True)
class _TruncatedQuadraticLaw(DistanceLaw):
    """Linear density ``2 r / (hi^2 - lo^2)`` on ``[lo, hi]``.

    This is the shell-to-point law conditioned on landing within ``hi``;
    the conditioning preserves the linear-in-r shape.
    """

    lo_km: float
    hi_km: float

    @property
    def _span(self) -> float:
        return self.hi_km**2 - self.lo_km**2

    @property
    def support_km(self) -> tuple[float, float]:
        return (self.lo_km, self.hi_km)

    def cdf(self, r_km):
        r = np.asarray(r_km, dtype=float)
        value = np.clip((r * r - self.lo_km**2) / self._span, 0.0, 1.0)
        return _maybe_scalar(value, r_km)

    def pdf(self, r_km):
        r = np.asarray(r_km, dtype=float)
        inside = (r >= self.lo_km) & (r <= self.hi_km)
        value = np.where(inside, 2.0 * r / self._span, 0.0)
        return _maybe_scalar(value, r_km)

    def inverse_cdf(self, u):
        arr = _validate_probability(u)
        value = np.sqrt(self.lo_km**2 + arr * self._span)
        return _maybe_scalar(value, u)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def dist_satellite_to_ground(sphere: SphereModel) -> DistanceLaw:
    """Distance from a uniformly placed shell satellite to a ground point."""
    return _ShellToPointLaw(
        shell_radius_km=sphere.shell_radius_km,
        point_radius_km=sphere.earth_radius_km,
    )


def dist_nearest_satellite(sphere: SphereModel, n_satellites: int) -> DistanceLaw:
    """Distance from a ground point to the nearest of ``n_satellites``."""
    if not isinstance(n_satellites, int) or isinstance(n_satellites, bool) or n_satellites < 1:
        raise ParameterError(
            f"satellite count must be an integer >= 1, got {n_satellites!r}"
        )
    return _NearestOfNLaw(base=dist_satellite_to_ground(sphere), n=n_satellites)


def dist_device_to_satellite(sphere: SphereModel) -> DistanceLaw:
    """Distance from a uniformly placed ground device to a fixed satellite.

    By symmetry of the two-sphere geometry this equals the satellite-to-ground
    law: only the product of the two radii enters.
    """
    return _ShellToPointLaw(
        shell_radius_km=sphere.earth_radius_km,
        point_radius_km=sphere.shell_radius_km,
    )


def dist_interferer_to_serving_sat(sphere: SphereModel, beamwidth_rad: float) -> DistanceLaw:
    """Distance from an interfering device inside the served cap to the satellite.

    Devices interfere only when they fall inside the satellite's coverage cap,
    so the shell-to-point law is truncated at the cap-edge slant range.
    """
    r_max = max_slant_range(beamwidth_rad, sphere)
    return _TruncatedQuadraticLaw(lo_km=sphere.satellite_altitude_km, hi_km=r_max)


def dist_target_satellite_to_es(sphere: SphereModel, beamwidth_rad: float) -> DistanceLaw:
    """Distance from a satellite serving an earth station to that station.

    Conditioned on the station lying inside the satellite's coverage cap,
    which is the same truncation as the interferer law.
    """
    r_max = max_slant_range(beamwidth_rad, sphere)
    return _TruncatedQuadraticLaw(lo_km=sphere.satellite_altitude_km, hi_km=r_max)


def p_zero(sphere: SphereModel, beamwidth_rad: float, n_satellites: int) -> float:
    """Probability that none of ``n_satellites`` covers a given ground point."""
    if not isinstance(n_satellites, int) or isinstance(n_satellites, bool) or n_satellites < 1:
        raise ParameterError(
            f"satellite count must be an integer >= 1, got {n_satellites!r}"
        )
    r_max = max_slant_range(beamwidth_rad, sphere)
    cos_theta3 = coverage_cap_cos_theta3(r_max, beamwidth_rad, sphere)
    p_visible = satellite_success_prob(cos_theta3)
    return math.exp(n_satellites * math.log1p(-p_visible))


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def sample_uniform_cap(
    cap: CapSpec, rng: np.random.Generator, size: int | tuple[int, ...]
) -> np.ndarray:
    """Draw points uniform on the spherical cap, as xyz with shape ``size + (3,)``.

    The cap is centered on the +z axis: ``cos(theta)`` is uniform on
    ``[cos(zenith_angle), 1]`` and the azimuth is uniform.
    """
    shape = (size,) if isinstance(size, int) else tuple(size)
    cos_theta = rng.uniform(math.cos(cap.zenith_angle_rad), 1.0, size=shape)
    azimuth = rng.uniform(0.0, 2.0 * math.pi, size=shape)
    sin_theta = np.sqrt(np.clip(1.0 - cos_theta * cos_theta, 0.0, None))
    radius = cap.shell_radius_km
    return np.stack(
        (
            radius * sin_theta * np.cos(azimuth),
            radius * sin_theta * np.sin(azimuth),
            radius * cos_theta,
        ),
        axis=-1,
    )


def sample_distance(
    law: DistanceLaw, rng: np.random.Generator, size: int | tuple[int, ...]
) -> np.ndarray:
    """Draw distances from ``law`` by inverse-CDF sampling."""
    return np.asarray(law.inverse_cdf(rng.random(size)), dtype=float)
