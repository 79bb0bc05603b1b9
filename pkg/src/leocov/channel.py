"""Antenna gains, free-space path loss, and the two fading families.

Uplink small-scale fading is Nakagami-m on the power (a unit-mean Gamma
variable), with a tight exponential-type bound used for its CCDF.  Downlink
fading is shadowed-Rician: the line-of-sight amplitude is Nakagami-shadowed
(its power is Gamma with shape ``shadowing_order`` and mean ``los_power``)
on top of a diffuse complex-Gaussian scatter component with per-dimension
variance ``half_scatter_power``.

All gains are linear (not dB); frequencies are in Hz; distances in km.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError
from .numerics import (
    kummer_1f1,
    lower_incomplete_gamma,
    pochhammer,
    sum_series,
)

__all__ = [
    "AntennaPattern",
    "NakagamiParams",
    "ShadowedRicianParams",
    "TwoPointLaw",
    "interferer_directivity_law",
    "nakagami_ccdf_alzer",
    "nakagami_power_pdf",
    "path_loss",
    "sample_nakagami_power",
    "sample_sr_power",
    "satellite_main_gain",
    "sr_mgf",
    "sr_power_cdf",
    "sr_power_pdf",
    "sr_series_coefficient",
]

#: Speed of light in km/s (distances in this package are kilometers).
SPEED_OF_LIGHT_KM_S = 299792.458


# ---------------------------------------------------------------------------
# Antenna model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AntennaPattern:
    """Sectorized antenna gains for the devices, satellites, and station.

    ``device_main_gain`` applies when a device's boresight falls within
    ``device_threshold_angle_rad`` of the link direction (an event of
    probability ``threshold / 2 pi`` for a uniformly oriented device);
    ``device_side_gain`` applies otherwise.  Satellites use a cap beam of
    full width ``satellite_beamwidth_rad`` whose peak gain follows from
    energy conservation over the cap.
    """

    device_main_gain: float
    device_side_gain: float
    device_threshold_angle_rad: float
    satellite_beamwidth_rad: float
    earth_station_gain: float

    def __post_init__(self) -> None:
        if not (self.device_main_gain > 0.0):
            raise ParameterError(
                f"device_main_gain must be positive, got {self.device_main_gain}"
            )
        if not (0.0 < self.device_side_gain <= self.device_main_gain):
            raise ParameterError(
                "device_side_gain must lie in (0, device_main_gain], got "
                f"{self.device_side_gain} with main gain {self.device_main_gain}"
            )
        if not (0.0 < self.device_threshold_angle_rad <= 2.0 * math.pi):
            raise ParameterError(
                "device_threshold_angle_rad must lie in (0, 2 pi], got "
                f"{self.device_threshold_angle_rad}"
            )
        if not (0.0 < self.satellite_beamwidth_rad < math.pi):
            raise ParameterError(
                "satellite_beamwidth_rad must lie in (0, pi), got "
                f"{self.satellite_beamwidth_rad}"
            )
        if not (self.earth_station_gain > 0.0):
            raise ParameterError(
                f"earth_station_gain must be positive, got {self.earth_station_gain}"
            )

    @property
    def main_lobe_probability(self) -> float:
        """Chance a uniformly oriented device points its main lobe at the link."""
        return self.device_threshold_angle_rad / (2.0 * math.pi)


def satellite_main_gain(beamwidth_rad: float) -> float:
    """Peak gain of a satellite beam covering a cap of full width ``beamwidth_rad``.

    Energy conservation over the spherical cap of half-angle ``beamwidth/2``
    gives ``2 / (1 - cos(beamwidth / 2))``.
    """
    if not (0.0 < beamwidth_rad <= 2.0 * math.pi):
        raise ParameterError(
            f"beamwidth must lie in (0, 2 pi] radians, got {beamwidth_rad}"
        )
    return 2.0 / (1.0 - math.cos(0.5 * beamwidth_rad))


@dataclass(frozen=True)
class TwoPointLaw:
    """A discrete law supported on two values."""

    values: tuple[float, float]
    probabilities: tuple[float, float]

    @property
    def mean(self) -> float:
        return (
            self.probabilities[0] * self.values[0]
            + self.probabilities[1] * self.values[1]
        )


def interferer_directivity_law(pattern: AntennaPattern) -> TwoPointLaw:
    """Two-state law of the device-to-satellite directivity product.

    An interfering device points its main lobe toward the serving satellite
    with probability ``device_threshold_angle / 2 pi`` (contributing
    ``device_main_gain * satellite_gain``) and its side lobe otherwise.
    """
    sat_gain = satellite_main_gain(pattern.satellite_beamwidth_rad)
    p_main = pattern.main_lobe_probability
    return TwoPointLaw(
        values=(pattern.device_main_gain * sat_gain, pattern.device_side_gain * sat_gain),
        probabilities=(p_main, 1.0 - p_main),
    )


# ---------------------------------------------------------------------------
# Path loss
# ---------------------------------------------------------------------------


def path_loss(frequency_hz: float, exponent: float, distance_km: float) -> float:
    """Received-over-transmitted power ratio ``(c / 4 pi f)^2 r^-exponent``.

    With ``exponent == 2`` this is the Friis free-space law; other exponents
    keep the same frequency-dependent aperture factor.  Distances are in km,
    so the wavelength factor uses the speed of light in km/s.
    """
    if not (frequency_hz > 0.0):
        raise ParameterError(f"frequency must be positive, got {frequency_hz}")
    if not (distance_km > 0.0):
        raise ParameterError(f"distance must be positive, got {distance_km}")
    aperture = SPEED_OF_LIGHT_KM_S / (4.0 * math.pi * frequency_hz)
    return aperture * aperture * distance_km ** (-exponent)


# ---------------------------------------------------------------------------
# Nakagami-m fading (uplink)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NakagamiParams:
    """Integer-order Nakagami-m fading; the power is Gamma(m, 1/m), mean 1."""

    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ParameterError(
                f"Nakagami order m must be an integer >= 1, got {self.m!r}"
            )

    @cached_property
    def alzer_eta(self) -> float:
        """Rate constant ``m (m!)^(-1/m)`` of the exponential-type CCDF bound."""
        return self.m * math.factorial(self.m) ** (-1.0 / self.m)


def nakagami_power_pdf(x: float, params: NakagamiParams) -> float:
    """Density of the unit-mean Gamma(m, 1/m) fading power at ``x >= 0``."""
    if x < 0.0:
        return 0.0
    m = params.m
    if x == 0.0:
        return 1.0 if m == 1 else 0.0
    return m**m * x ** (m - 1) * math.exp(-m * x) / math.factorial(m - 1)


def nakagami_ccdf_alzer(psi: float, params: NakagamiParams) -> float:
    """Tight upper bound ``1 - (1 - e^(-eta psi))^m`` on the power CCDF.

    Exact for ``m == 1``; for larger integer m it dominates the true Gamma
    tail while staying binomially expandable, which is what the coverage
    integrals rely on.
    """
    if psi < 0.0:
        raise ParameterError(f"threshold must be nonnegative, got {psi}")
    if psi == 0.0:
        return 1.0
    return 1.0 - (-math.expm1(-params.alzer_eta * psi)) ** params.m


def sample_nakagami_power(
    params: NakagamiParams, rng: np.random.Generator, size: int | tuple[int, ...]
) -> np.ndarray:
    """Draw fading powers ~ Gamma(m, 1/m)."""
    return rng.gamma(shape=float(params.m), scale=1.0 / params.m, size=size)


# ---------------------------------------------------------------------------
# Shadowed-Rician fading (downlink)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShadowedRicianParams:
    """Shadowed-Rician fading power parameters.

    ``half_scatter_power`` is the per-dimension scatter variance (the mean
    scatter power is twice this), ``shadowing_order`` the Gamma shape of the
    line-of-sight power, and ``los_power`` its mean (zero disables the LOS
    component, collapsing the law to an exponential).
    """

    half_scatter_power: float
    shadowing_order: float
    los_power: float

    def __post_init__(self) -> None:
        if not (self.half_scatter_power > 0.0):
            raise ParameterError(
                f"half_scatter_power must be positive, got {self.half_scatter_power}"
            )
        if not (self.shadowing_order > 0.0):
            raise ParameterError(
                f"shadowing_order must be positive, got {self.shadowing_order}"
            )
        if not (self.los_power >= 0.0):
            raise ParameterError(
                f"los_power must be nonnegative, got {self.los_power}"
            )

    @property
    def beta(self) -> float:
        """Scatter decay rate ``1 / (2 half_scatter_power)``."""
        return 1.0 / (2.0 * self.half_scatter_power)

    @property
    def delta(self) -> float:
        """LOS coupling rate in the density's confluent factor."""
        two_c = 2.0 * self.half_scatter_power
        return self.los_power / (two_c * (two_c * self.shadowing_order + self.los_power))

    @property
    def kappa(self) -> float:
        """Density value at zero power."""
        two_c = 2.0 * self.half_scatter_power
        q = self.shadowing_order
        return (two_c * q) ** q / (two_c * (two_c * q + self.los_power) ** q)

    @property
    def decay_rate(self) -> float:
        """Exponential tail rate ``beta - delta``, in cancellation-free form."""
        q = self.shadowing_order
        return q / (2.0 * self.half_scatter_power * q + self.los_power)

    @property
    def mean(self) -> float:
        """Average fading power: scatter plus line-of-sight."""
        return 2.0 * self.half_scatter_power + self.los_power


def sr_power_pdf(x: float, params: ShadowedRicianParams) -> float:
    """Shadowed-Rician power density ``kappa e^(-beta x) 1F1(q; 1; delta x)``.

    Evaluated through the Kummer transform as
    ``kappa e^(-(beta - delta) x) 1F1(1 - q; 1; -delta x)`` so the
    exponentially growing confluent factor never overflows at large ``x``.
    """
    if x < 0.0:
        return 0.0
    q = params.shadowing_order
    damped = math.exp(-params.decay_rate * x)
    if params.delta == 0.0:
        return params.kappa * math.exp(-params.beta * x)
    return params.kappa * damped * kummer_1f1(1.0 - q, 1.0, -params.delta * x)


def sr_mgf(x: float, params: ShadowedRicianParams) -> float:
    """Laplace transform ``E[e^(-x P)]`` of the fading power, closed form.

    Finite exactly for ``x > -(beta - delta)``, the tail decay rate.
    """
    if not (x > -params.decay_rate):
        raise ParameterError(
            f"transform argument must exceed -{params.decay_rate}, got {x}"
        )
    two_c = 2.0 * params.half_scatter_power
    q = params.shadowing_order
    omega = params.los_power
    shifted = 1.0 + two_c * x
    return (
        (two_c * q) ** q
        * shifted ** (q - 1.0)
        / ((two_c * q + omega) * shifted - omega) ** q
    )


def sr_series_coefficient(k: int, params: ShadowedRicianParams) -> float:
    """Coefficient of ``x^k e^(-(beta - delta) x)`` in the power density.

    Equal to ``(-1)^k kappa delta^k (1 - q)_k / (k!)^2``; identically zero
    for ``k >= q`` when the shadowing order q is a positive integer.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ParameterError(f"series index must be a nonnegative integer, got {k!r}")
    q = params.shadowing_order
    rising = pochhammer(1.0 - q, k)
    if rising == 0.0:
        return 0.0
    sign = -1.0 if k % 2 else 1.0
    factorial_k = math.factorial(k)
    return (
        sign
        * params.kappa
        * params.delta**k
        * rising
        / (factorial_k * factorial_k)
    )


def sr_power_cdf(x: float, params: ShadowedRicianParams) -> float:
    """Distribution function of the fading power, by termwise integration.

    Integrating the series form of the density gives
    ``sum_k Psi(k) gamma(k + 1, (beta - delta) x) / (beta - delta)^(k + 1)``
    with ``gamma`` the lower incomplete gamma integral.
    """
    if x < 0.0:
        return 0.0
    if x == 0.0:
        return 0.0
    rate = params.decay_rate
    scaled = rate * x

    def term(k: int) -> float:
        coefficient = sr_series_coefficient(k, params)
        if coefficient == 0.0:
            return 0.0
        return coefficient * lower_incomplete_gamma(k + 1.0, scaled) / rate ** (k + 1)

    value = sum_series(term).value
    return min(max(value, 0.0), 1.0)


def sample_sr_power(
    params: ShadowedRicianParams, rng: np.random.Generator, size: int | tuple[int, ...]
) -> np.ndarray:
    """Draw fading powers constructively from the amplitude model.

    The LOS power is Gamma(q, los_power / q); adding a complex-Gaussian
    scatter term with per-dimension variance ``half_scatter_power`` and
    taking the squared magnitude yields the shadowed-Rician power.
    """
    q = params.shadowing_order
    los_amplitude = np.sqrt(
        rng.gamma(shape=q, scale=params.los_power / q, size=size)
    )
    scatter_scale = math.sqrt(params.half_scatter_power)
    in_phase = los_amplitude + scatter_scale * rng.standard_normal(size)
    quadrature = scatter_scale * rng.standard_normal(size)
    return in_phase * in_phase + quadrature * quadrature
