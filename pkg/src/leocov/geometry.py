"""Spherical Earth / orbital-shell geometry.

Distances are kilometres, angles radians.  The model is a perfectly
spherical Earth of radius ``earth_radius_km`` with satellites on a
concentric shell at altitude ``satellite_altitude_km``.

Angle conventions:

* ``phi``  — view angle at the *satellite* between nadir and a ground point;
* ``psi``  — Earth-centered angle between the sub-satellite point and a
  ground point (or between two surface points);
* ``theta1`` — Earth-centered zenith angle of the finite ground region;
* ``cos_theta3`` — cosine of the Earth-centered zenith angle of a
  satellite's coverage cap, i.e. of the region from which the satellite is
  within its maximum service slant range.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

from .errors import ParameterError

__all__ = [
    "EARTH_RADIUS_KM",
    "SphereModel",
    "CapSpec",
    "LinkGeometry",
    "CoverageExceedsRegionWarning",
    "slant_range",
    "max_slant_range",
    "coverage_cap_cos_theta3",
    "cap_area",
    "slant_range_from_center_angle",
    "center_angle_from_slant_range",
    "interferer_success_prob",
    "satellite_success_prob",
    "link_geometry",
]

EARTH_RADIUS_KM = 6371.0


class CoverageExceedsRegionWarning(UserWarning):
    """A satellite coverage cap is larger than the finite ground region.

    The interferer success probability is then clamped to one: every device
    in the region can reach the satellite.
    """


@dataclass(frozen=True)
class SphereModel:
    """Spherical Earth plus one satellite shell."""

    satellite_altitude_km: float
    earth_radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self):
        if not (self.earth_radius_km > 0.0):
            raise ParameterError(
                f"earth_radius_km must be > 0, got {self.earth_radius_km}"
            )
        if not (self.satellite_altitude_km > 0.0):
            raise ParameterError(
                f"satellite_altitude_km must be > 0, got {self.satellite_altitude_km}"
            )

    @property
    def shell_radius_km(self) -> float:
        return self.earth_radius_km + self.satellite_altitude_km

    @cached_property
    def horizon_angle_rad(self) -> float:
        """Satellite-side view angle at which the line of sight grazes Earth."""
        return math.asin(self.earth_radius_km / self.shell_radius_km)


@dataclass(frozen=True)
class CapSpec:
    """A spherical cap: all shell points within ``zenith_angle_rad`` of a pole."""

    zenith_angle_rad: float
    shell_radius_km: float

    def __post_init__(self):
        if not (0.0 <= self.zenith_angle_rad <= math.pi):
            raise ParameterError(
                f"zenith_angle_rad must lie in [0, pi], got {self.zenith_angle_rad}"
            )
        if not (self.shell_radius_km > 0.0):
            raise ParameterError(
                f"shell_radius_km must be > 0, got {self.shell_radius_km}"
            )


@dataclass(frozen=True)
class LinkGeometry:
    """Derived geometric constants for one (beamwidth, ground region) setup."""

    r_max_km: float
    cos_theta3: float
    ground_zenith_rad: float
    p_interferer: float
    p_satellite_visible: float


def slant_range(phi: float, sphere: SphereModel) -> float:
    """Satellite-to-ground distance along a view angle ``phi`` from nadir."""
    horizon = sphere.horizon_angle_rad
    if phi < 0.0:
        raise ParameterError(f"view angle must be >= 0, got {phi}")
    if phi > horizon:
        raise ParameterError(
            f"view angle {phi} exceeds the horizon angle {horizon}"
        )
    r_e = sphere.earth_radius_km
    r_s = sphere.shell_radius_km
    s = r_s * math.sin(phi)
    inner = max(r_e * r_e - s * s, 0.0)
    return r_s * math.cos(phi) - math.sqrt(inner)


def max_slant_range(phi_s: float, sphere: SphereModel) -> float:
    """Largest service distance of a satellite with beamwidth ``phi_s``.

    The beam edge sits at view angle ``phi_s / 2``.
    """
    if not (phi_s > 0.0):
        raise ParameterError(f"beamwidth must be > 0, got {phi_s}")
    if phi_s > 2.0 * sphere.horizon_angle_rad:
        raise ParameterError(
            f"beamwidth {phi_s} exceeds twice the horizon angle "
            f"{sphere.horizon_angle_rad}"
        )
    return slant_range(phi_s / 2.0, sphere)


def coverage_cap_cos_theta3(r_max: float, phi_s: float, sphere: SphereModel) -> float:
    """Cosine of the Earth-centered half-angle of a satellite's coverage cap.

    Mathematically equal to ``(r_s - r_max cos(phi_s/2)) / r_e`` when
    ``r_max`` is the beam-edge slant range; evaluated here through the
    chord identity ``1 - cos = (r_max - H)(r_max + H) / (2 r_e r_s)``,
    which avoids catastrophic cancellation for narrow beams.
    """
    h = sphere.satellite_altitude_km
    if not (0.0 <= phi_s <= 2.0 * sphere.horizon_angle_rad):
        raise ParameterError(f"beamwidth must lie in [0, 2*horizon], got {phi_s}")
    if r_max < h * (1.0 - 1e-12):
        raise ParameterError(
            f"r_max ({r_max}) cannot be smaller than the shell altitude ({h})"
        )
    one_minus = ((r_max - h) * (r_max + h)) / (
        2.0 * sphere.earth_radius_km * sphere.shell_radius_km
    )
    return 1.0 - one_minus


def cap_area(cap: CapSpec) -> float:
    """Surface area of a spherical cap."""
    r = cap.shell_radius_km
    return 2.0 * math.pi * r * r * (1.0 - math.cos(cap.zenith_angle_rad))


def slant_range_from_center_angle(psi: float, sphere: SphereModel) -> float:
    """Shell-to-surface distance for an Earth-centered separation ``psi``.

    Evaluates the law of cosines as ``H^2 + 4 r_e r_s sin^2(psi / 2)``, which
    avoids the large cancellation of the direct form at small separations.
    """
    if not (0.0 <= psi <= math.pi):
        raise ParameterError(f"center angle must lie in [0, pi], got {psi}")
    r_e = sphere.earth_radius_km
    r_s = sphere.shell_radius_km
    altitude = sphere.satellite_altitude_km
    sin_half = math.sin(0.5 * psi)
    return math.sqrt(altitude * altitude + 4.0 * r_e * r_s * sin_half * sin_half)


def center_angle_from_slant_range(r: float, sphere: SphereModel) -> float:
    """Earth-centered separation for a shell-to-surface distance ``r``.

    Uses the half-angle identity ``psi = 2 atan2(sin(psi/2), cos(psi/2))``
    with both half-angle factors in product form, which stays fully accurate
    at both ends of the band where the direct arccosine loses digits.
    """
    r_e = sphere.earth_radius_km
    r_s = sphere.shell_radius_km
    lo = sphere.satellite_altitude_km
    hi = r_e + r_s
    if not (lo * (1.0 - 1e-12) <= r <= hi * (1.0 + 1e-12)):
        raise ParameterError(f"slant range {r} outside the reachable band [{lo}, {hi}]")
    # 4 r_e r_s sin^2(psi/2) = (r - lo)(r + lo);  4 r_e r_s cos^2(psi/2) = (hi - r)(hi + r)
    sin_half = math.sqrt(max((r - lo) * (r + lo), 0.0))
    cos_half = math.sqrt(max((hi - r) * (hi + r), 0.0))
    return 2.0 * math.atan2(sin_half, cos_half)


def interferer_success_prob(cos_theta3: float, zenith_target_rad: float) -> float:
    """Probability that a device uniform on the ground region lies inside a
    satellite's coverage cap centered on the same axis.

    Ratio of the two cap areas, clamped to one (with a warning) when the
    coverage cap exceeds the ground region.
    """
    if not (-1.0 <= cos_theta3 <= 1.0):
        raise ParameterError(f"cos_theta3 must lie in [-1, 1], got {cos_theta3}")
    if not (0.0 < zenith_target_rad <= math.pi):
        raise ParameterError(
            f"ground-region zenith angle must lie in (0, pi], got {zenith_target_rad}"
        )
    numerator = 1.0 - cos_theta3
    denominator = 1.0 - math.cos(zenith_target_rad)
    if numerator == 0.0:
        return 0.0
    ratio = numerator / denominator
    if ratio > 1.0:
        warnings.warn(
            "satellite coverage cap exceeds the ground region; "
            "interferer success probability clamped to 1",
            CoverageExceedsRegionWarning,
            stacklevel=2,
        )
        return 1.0
    return ratio


def satellite_success_prob(cos_theta3: float) -> float:
    """Probability that a satellite uniform on its shell covers a ground point."""
    if not (-1.0 <= cos_theta3 <= 1.0):
        raise ParameterError(f"cos_theta3 must lie in [-1, 1], got {cos_theta3}")
    return (1.0 - cos_theta3) / 2.0


def link_geometry(
    sphere: SphereModel, phi_s_rad: float, coverage_radius_km: float
) -> LinkGeometry:
    """Bundle the derived constants used by the distance and SINR models."""
    if not (coverage_radius_km > 0.0):
        raise ParameterError(
            f"coverage_radius_km must be > 0, got {coverage_radius_km}"
        )
    r_max = max_slant_range(phi_s_rad, sphere)
    cos_t3 = coverage_cap_cos_theta3(r_max, phi_s_rad, sphere)
    theta1 = coverage_radius_km / sphere.earth_radius_km
    if theta1 > math.pi:
        raise ParameterError(
            f"coverage_radius_km {coverage_radius_km} wraps past the antipode"
        )
    return LinkGeometry(
        r_max_km=r_max,
        cos_theta3=cos_t3,
        ground_zenith_rad=theta1,
        p_interferer=interferer_success_prob(cos_t3, theta1),
        p_satellite_visible=satellite_success_prob(cos_t3),
    )
