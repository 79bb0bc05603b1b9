"""Quadrature/series evaluation of coverage probabilities and ergodic rates.

Model summary
-------------
Uplink (device to serving satellite): the serving satellite is the nearest of
``n_satellites`` and must lie inside its own coverage cap (slant range at most
``r_max``); fading is Nakagami-m handled through a tight exponential-type
CCDF bound, which turns the coverage probability into an alternating binomial
combination of interference Laplace transforms.  Interference comes from the
other ``n_devices - 1`` devices, each inside the cap independently, with a
two-state directivity and duty-cycle-scaled power.

Downlink (satellite to earth station): fading is shadowed-Rician, expanded in
a power series whose k-th term involves a lower-incomplete-gamma CDF bound;
interferers are the other visible satellites.  The interference factor uses
the collapsed combinatorial form with coefficients over ``n_satellites``
paired with exponent ``n_satellites - 1 - n`` — the convention that drops
the empty-interferer event; ``include_empty_interference_term=True`` switches
both links to the plain ``(1 - p + p x)^(n-1)`` convention.

Ergodic rates integrate the coverage curve over ``2^t - 1``.  The downlink
rate additionally needs thermal noise in the SINR (and the include-empty
convention): without it the coverage floor — the strictly positive chance of
a completely interference-free sky — makes the rate integral diverge.

All public metric functions return :class:`MetricResult`, carrying the value,
a conservative numerical error bound, and the number of series terms used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import (
    SPEED_OF_LIGHT_KM_S,
    satellite_main_gain,
    sr_mgf,
    sr_series_coefficient,
)
from .distance import (
    dist_interferer_to_serving_sat,
    dist_nearest_satellite,
)
from .errors import ParameterError, ToleranceError
from .numerics import (
    DEFAULT_QUADRATURE,
    integrate_semi_infinite_with_bound,
    integrate_with_bound,
    ln_gamma,
    sum_series,
)
from .params import SystemParams

__all__ = [
    "MetricResult",
    "aer_ses",
    "aer_ts",
    "coverage_e2e",
    "coverage_ses",
    "coverage_ts",
    "laplace_interference_ses",
    "laplace_interference_ts",
]


@dataclass(frozen=True)
class MetricResult:
    """A computed metric with its numerical quality report."""

    value: float
    numeric_error_bound: float
    series_terms_used: int


def _finalize_probability(value: float, bound: float, terms: int) -> MetricResult:
    """Clamp tiny numerical overshoots of [0, 1]; reject anything larger."""
    slack = bound + 1e-15
    if value < -slack or value > 1.0 + slack:
        raise ToleranceError(
            f"probability estimate {value} overshoots [0, 1] beyond the numeric "
            f"error bound {bound}",
            value,
            bound,
        )
    return MetricResult(min(max(value, 0.0), 1.0), bound, terms)


# ---------------------------------------------------------------------------
# Collapsed per-link interference factors
# ---------------------------------------------------------------------------


def _interference_factor_ts(
    x: float, n_devices: int, p: float, include_empty: bool
) -> float:
    """Uplink collapse of the binomial interferer sum at mean factor ``x``.

    ``sum_j C(n-1, j) (p x)^j (1-p)^(n-1-j)`` equals ``(1 - p + p x)^(n-1)``;
    the default convention subtracts the empty j = 0 term.
    """
    candidates = n_devices - 1
    if candidates == 0:
        return 1.0 if include_empty else 0.0
    full = math.exp(candidates * math.log1p(p * (x - 1.0)))
    if include_empty:
        return full
    empty = math.exp(candidates * math.log1p(-p))
    return max(full - empty, 0.0)


def _interference_factor_ses(
    x: float, n_satellites: int, p: float, include_empty: bool
) -> float:
    """Downlink collapse of the visible-interferer sum at mean factor ``x``.

    The retained convention pairs coefficients ``C(n_satellites, j)`` with
    complementary exponent ``n_satellites - 1 - j`` over ``j = 1 .. n-1``,
    which collapses to ``[(1-p+px)^n - (1-p)^n - (px)^n] / (1-p)``.  The
    include-empty variant is the plain ``(1 - p + p x)^(n-1)``.
    """
    if n_satellites == 1:
        return 1.0 if include_empty else 0.0
    if include_empty:
        return math.exp((n_satellites - 1) * math.log1p(p * (x - 1.0)))
    full = math.exp(n_satellites * math.log1p(p * (x - 1.0)))
    empty = math.exp(n_satellites * math.log1p(-p))
    if x > 0.0:
        top = math.exp(n_satellites * (math.log(p) + math.log(x)))
    else:
        top = 0.0
    return max((full - empty - top) / (1.0 - p), 0.0)


# ---------------------------------------------------------------------------
# Mean per-interferer attenuation factors (distance/fading averages)
# ---------------------------------------------------------------------------


def _mean_interferer_factor_ts(t0: float, params: SystemParams) -> float:
    """Average over one uplink interferer of ``E[exp(-t0 D h / r^alpha)]``.

    The directivity D is the two-state main/side law, the fading power h is
    Gamma(m, 1/m) whose Laplace transform is ``(1 + s/m)^(-m)``, and the
    distance follows the cap-truncated law.
    """
    if t0 == 0.0:
        return 1.0
    ant = params.antenna
    law = dist_interferer_to_serving_sat(params.sphere, ant.satellite_beamwidth_rad)
    lo, hi = law.support_km
    m = params.nakagami.m
    sat_gain = satellite_main_gain(ant.satellite_beamwidth_rad)
    d_main = ant.device_main_gain * sat_gain
    d_side = ant.device_side_gain * sat_gain
    p_main = ant.main_lobe_probability
    alpha = params.uplink_path_loss_exponent

    def integrand(r: float) -> float:
        s = t0 * r ** (-alpha) / m
        return (
            p_main * (1.0 + s * d_main) ** (-m)
            + (1.0 - p_main) * (1.0 + s * d_side) ** (-m)
        ) * law.pdf(r)

    value, _ = integrate_with_bound(integrand, lo, hi)
    return value


def _mean_interferer_factor_ses(t0: float, params: SystemParams) -> float:
    """Average over one visible interfering satellite of ``E[exp(-t0 S / r^alpha)]``.

    S is the shadowed-Rician fading power (closed-form transform) and the
    distance follows the same cap-truncated law as uplink interferers.
    """
    if t0 == 0.0:
        return 1.0
    law = dist_interferer_to_serving_sat(
        params.sphere, params.antenna.satellite_beamwidth_rad
    )
    lo, hi = law.support_km
    sr = params.shadowed_rician
    alpha = params.downlink_path_loss_exponent

    def integrand(r: float) -> float:
        return sr_mgf(t0 * r ** (-alpha), sr) * law.pdf(r)

    value, _ = integrate_with_bound(integrand, lo, hi)
    return value


# ---------------------------------------------------------------------------
# Per-link interference Laplace transforms
# ---------------------------------------------------------------------------


def laplace_interference_ts(
    serving_distance_km: float,
    series_index: int,
    threshold_linear: float,
    params: SystemParams,
    include_empty_interference_term: bool = False,
) -> float:
    """Uplink interference transform at the n-th CCDF-bound expansion term.

    Evaluates the collapsed device-interference factor at
    ``t0 = n eta T r_m^alpha duty / D_target``.
    """
    if threshold_linear < 0.0:
        raise ParameterError(f"threshold must be nonnegative, got {threshold_linear}")
    if params.n_devices == 1:
        return 1.0 if include_empty_interference_term else 0.0
    ant = params.antenna
    d_target = ant.device_main_gain * satellite_main_gain(ant.satellite_beamwidth_rad)
    t0 = (
        series_index
        * params.nakagami.alzer_eta
        * threshold_linear
        * params.duty_cycle
        * serving_distance_km**params.uplink_path_loss_exponent
        / d_target
    )
    mean_factor = _mean_interferer_factor_ts(t0, params)
    return _interference_factor_ts(
        mean_factor,
        params.n_devices,
        params.geometry.p_interferer,
        include_empty_interference_term,
    )


def _zeta(series_index: int) -> float:
    """Rate constant ``Gamma(k + 2)^(-1/(k+1))`` of the CDF bound at order k."""
    return math.exp(-ln_gamma(series_index + 2.0) / (series_index + 1.0))


def laplace_interference_ses(
    serving_distance_km: float,
    exp_index: int,
    series_index: int,
    threshold_linear: float,
    params: SystemParams,
    include_empty_interference_term: bool = False,
) -> float:
    """Downlink interference transform at binomial index ``exp_index`` of the
    order-``series_index`` CDF-bound expansion.

    Evaluates the collapsed satellite-interference factor at
    ``t0' = u zeta(k) (beta - delta) T (p_interferer / p_serving) r'^alpha``.
    """
    if threshold_linear < 0.0:
        raise ParameterError(f"threshold must be nonnegative, got {threshold_linear}")
    if params.n_satellites == 1:
        return 1.0 if include_empty_interference_term else 0.0
    t0 = (
        exp_index
        * _zeta(series_index)
        * params.shadowed_rician.decay_rate
        * threshold_linear
        * (params.interfering_satellite_power_w / params.satellite_power_w)
        * serving_distance_km**params.downlink_path_loss_exponent
    )
    mean_factor = _mean_interferer_factor_ses(t0, params)
    return _interference_factor_ses(
        mean_factor,
        params.n_satellites,
        params.geometry.p_satellite_visible,
        include_empty_interference_term,
    )


# ---------------------------------------------------------------------------
# Coverage probabilities
# ---------------------------------------------------------------------------

# Sensitivity of the collapsed interference factors to the inner quadrature:
# |dL/dx| <= (n - 1) p, so inner quadrature tolerances propagate by that factor.
_INNER_QUAD_TOL = DEFAULT_QUADRATURE.abs_tol + DEFAULT_QUADRATURE.rel_tol


def coverage_ts(
    threshold_linear: float,
    params: SystemParams,
    include_empty_interference_term: bool = False,
) -> MetricResult:
    """Uplink coverage probability at SIR threshold ``threshold_linear``.

    Integrates the nearest-satellite density over serving distances up to the
    cap edge (the served event), with the fading CCDF bound expanded into an
    alternating binomial combination of interference transforms.  The value
    is therefore capped by the probability that some satellite covers the
    device at all.
    """
    if threshold_linear < 0.0:
        raise ParameterError(f"threshold must be nonnegative, got {threshold_linear}")
    m = params.nakagami.m
    law = dist_nearest_satellite(params.sphere, params.n_satellites)
    lo = params.sphere.satellite_altitude_km
    hi = params.geometry.r_max_km

    total = 0.0
    bound = 0.0
    for n in range(1, m + 1):
        def integrand(r: float, _n: int = n) -> float:
            return law.pdf(r) * laplace_interference_ts(
                r, _n, threshold_linear, params, include_empty_interference_term
            )

        piece, piece_bound = integrate_with_bound(integrand, lo, hi)
        coefficient = math.comb(m, n)
        total += (1.0 if n % 2 == 1 else -1.0) * coefficient * piece
        bound += coefficient * piece_bound
    inner_sensitivity = (params.n_devices - 1) * params.geometry.p_interferer
    bound += (2.0**m - 1.0) * inner_sensitivity * _INNER_QUAD_TOL
    return _finalize_probability(total, bound, m)


def _noise_coefficient_ses(params: SystemParams) -> float:
    """Thermal-noise scale of the downlink SINR: ``sigma^2`` over the serving
    power budget (transmit power, both gains, and the aperture factor).
    """
    aperture = SPEED_OF_LIGHT_KM_S / (4.0 * math.pi * params.downlink_frequency_hz)
    signal_scale = (
        params.satellite_power_w
        * satellite_main_gain(params.antenna.satellite_beamwidth_rad)
        * params.antenna.earth_station_gain
        * aperture
        * aperture
    )
    return params.noise_power_w / signal_scale


def coverage_ses(
    threshold_linear: float,
    params: SystemParams,
    include_empty_interference_term: bool = False,
    include_noise: bool = False,
) -> MetricResult:
    """Downlink coverage probability at threshold ``threshold_linear``,
    conditioned on at least one satellite being visible.

    The shadowed-Rician CDF series is integrated termwise: order k carries a
    ``(k+1)``-fold alternating binomial of interference transforms averaged
    over the serving-satellite distance law.  With ``include_noise`` the
    thermal term multiplies each transform by ``exp(-u zeta (beta-delta) T
    sigma^2 r^alpha / signal_scale)``.
    """
    if threshold_linear < 0.0:
        raise ParameterError(f"threshold must be nonnegative, got {threshold_linear}")
    sr = params.shadowed_rician
    rate = sr.decay_rate
    law = dist_interferer_to_serving_sat(
        params.sphere, params.antenna.satellite_beamwidth_rad
    )
    lo, hi = law.support_km
    noise_coeff = _noise_coefficient_ses(params) if include_noise else 0.0
    alpha = params.downlink_path_loss_exponent
    p_visible = params.geometry.p_satellite_visible
    n_sat = params.n_satellites

    quad_bound = 0.0

    def cdf_term(k: int) -> float:
        nonlocal quad_bound
        psi_k = sr_series_coefficient(k, sr)
        if psi_k == 0.0:
            return 0.0
        weight = psi_k * math.exp(ln_gamma(k + 1.0)) / rate ** (k + 1)
        zeta_k = _zeta(k)
        inner = 0.0
        for u in range(0, k + 2):
            if u == 0:
                # The u = 0 transform is distance-independent (and carries no
                # noise factor), so the distance average is exact.
                piece = _interference_factor_ses(
                    1.0, n_sat, p_visible, include_empty_interference_term
                )
                piece_bound = 0.0
            else:
                noise_rate = u * zeta_k * rate * threshold_linear * noise_coeff

                def integrand(r: float, _u: int = u) -> float:
                    value = laplace_interference_ses(
                        r,
                        _u,
                        k,
                        threshold_linear,
                        params,
                        include_empty_interference_term,
                    )
                    if noise_rate > 0.0:
                        value *= math.exp(-noise_rate * r**alpha)
                    return value * law.pdf(r)

                piece, piece_bound = integrate_with_bound(integrand, lo, hi)
            coefficient = math.comb(k + 1, u)
            inner += (1.0 if u % 2 == 0 else -1.0) * coefficient * piece
            quad_bound += abs(weight) * coefficient * piece_bound
        return weight * inner

    series = sum_series(cdf_term)
    inner_sensitivity = n_sat * p_visible
    bound = (
        quad_bound
        + inner_sensitivity * _INNER_QUAD_TOL
        + 1e-9 * abs(series.value)  # series truncation allowance
    )
    return _finalize_probability(1.0 - series.value, bound, series.terms_used)


def coverage_e2e(
    threshold_linear: float,
    params: SystemParams,
    include_empty_interference_term: bool = False,
) -> MetricResult:
    """End-to-end coverage: both links must individually clear the threshold.

    The two links fade independently, so the probability is the product of
    the per-link coverages; error bounds combine accordingly.
    """
    up = coverage_ts(threshold_linear, params, include_empty_interference_term)
    down = coverage_ses(threshold_linear, params, include_empty_interference_term)
    bound = (
        up.value * down.numeric_error_bound
        + down.value * up.numeric_error_bound
        + up.numeric_error_bound * down.numeric_error_bound
    )
    terms = max(up.series_terms_used, down.series_terms_used)
    return _finalize_probability(up.value * down.value, bound, terms)


# ---------------------------------------------------------------------------
# Average ergodic rates
# ---------------------------------------------------------------------------

# Beyond this exponent the coverage integrand has underflowed to zero for any
# realistic configuration; guarding avoids overflow in 2**t itself.
_RATE_TAIL_CUTOFF = 256.0


def aer_ts(
    params: SystemParams, include_empty_interference_term: bool = True
) -> MetricResult:
    """Average uplink ergodic rate ``∫ P[log2(1 + SIR) > t] dt`` in bit/s/Hz.

    Unserved devices contribute zero rate, which the coverage ceiling already
    encodes.  Defaults to the include-empty interference convention so the
    integrand is an exact survival function.
    """
    max_cp_bound = 0.0

    def integrand(t: float) -> float:
        nonlocal max_cp_bound
        if t >= _RATE_TAIL_CUTOFF:
            return 0.0
        res = coverage_ts(
            2.0**t - 1.0, params, include_empty_interference_term
        )
        max_cp_bound = max(max_cp_bound, res.numeric_error_bound)
        return res.value

    value, quad_bound = integrate_semi_infinite_with_bound(integrand)
    bound = quad_bound + 64.0 * max_cp_bound
    return MetricResult(max(value, 0.0), bound, params.nakagami.m)


def aer_ses(
    params: SystemParams, include_empty_interference_term: bool = True
) -> MetricResult:
    """Average downlink ergodic rate in bit/s/Hz, given a visible satellite.

    Thermal noise must be part of the SINR here: the strictly positive chance
    of an interferer-free sky would otherwise put a floor under the coverage
    curve and the rate integral would diverge.
    """
    max_cp_bound = 0.0
    max_terms = 1

    def integrand(t: float) -> float:
        nonlocal max_cp_bound, max_terms
        if t >= _RATE_TAIL_CUTOFF:
            return 0.0
        res = coverage_ses(
            2.0**t - 1.0,
            params,
            include_empty_interference_term,
            include_noise=True,
        )
        max_cp_bound = max(max_cp_bound, res.numeric_error_bound)
        max_terms = max(max_terms, res.series_terms_used)
        return res.value

    value, quad_bound = integrate_semi_infinite_with_bound(integrand)
    bound = quad_bound + 64.0 * max_cp_bound
    return MetricResult(max(value, 0.0), bound, max_terms)
