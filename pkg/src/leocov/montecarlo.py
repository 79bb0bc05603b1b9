"""Monte Carlo simulation of the uplink, downlink, and end-to-end metrics.

The engine simulates the physical protocol directly — satellite positions
uniform on the orbital shell, devices uniform on the finite ground region,
per-link fading and directivity draws, received powers summed into an SINR —
and never evaluates the closed-form coverage expressions.  The only shared
quantities are geometric constants (``r_max``, cap cosines) and the sampling
primitives of the channel module.

Determinism contract: trials are generated in fixed-size chunks, each chunk
seeded by a counter-based generator keyed on ``(seed, stream, chunk index)``.
Chunk results are reduced with exact (compensated) summation, so every
estimate is bit-identical across runs and across thread counts.  Coverage at
every threshold and the ergodic rate reuse the same underlying trials: a
scalar estimate equals the matching entry of a curve estimate exactly.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channel import (
    SPEED_OF_LIGHT_KM_S,
    sample_nakagami_power,
    sample_sr_power,
    satellite_main_gain,
)
from .errors import LeocovError, ParameterError
from .params import SystemParams

__all__ = [
    "DEFAULT_SEED",
    "EstimateWithCI",
    "LinkSimulation",
    "TrialConfig",
    "sample_trial_records",
    "simulate_aer_ses",
    "simulate_aer_ts",
    "simulate_coverage_curve_ses",
    "simulate_coverage_curve_ts",
    "simulate_coverage_e2e",
    "simulate_coverage_ses",
    "simulate_coverage_ts",
    "simulate_link_ses",
    "simulate_link_ts",
]

DEFAULT_SEED = 20260821

_CHUNK = 256
_STREAM_TS = 1
_STREAM_SES = 2
_STREAM_JOINT_TS = 3
_STREAM_JOINT_SES = 4
_MAX_RESAMPLE_ROUNDS = 4096


@dataclass(frozen=True)
class TrialConfig:
    """Simulation settings shared by all entry points.

    ``duty_cycle_mode`` chooses how device activity enters the interference:
    ``"scale"`` multiplies the summed interference by the duty cycle,
    ``"thinning"`` keeps each interferer active with that probability.
    ``condition_on_nonempty_visible_set`` switches the downlink estimand from
    dropping empty-sky trials to resampling them.
    """

    params: SystemParams
    trials: int = 50_000
    seed: int = DEFAULT_SEED
    noise_in_sinr: bool = True
    condition_on_nonempty_visible_set: bool = False
    duty_cycle_mode: str = "scale"
    threads: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.trials, int) or isinstance(self.trials, bool) or self.trials < 1:
            raise ParameterError(f"trials must be a positive integer, got {self.trials}")
        if (
            not isinstance(self.seed, int)
            or isinstance(self.seed, bool)
            or not (0 <= self.seed < 2**64)
        ):
            raise ParameterError(f"seed must be an integer in [0, 2**64), got {self.seed}")
        if self.duty_cycle_mode not in ("scale", "thinning"):
            raise ParameterError(
                f"duty_cycle_mode must be 'scale' or 'thinning', got {self.duty_cycle_mode!r}"
            )
        if self.threads is not None and (
            not isinstance(self.threads, int)
            or isinstance(self.threads, bool)
            or self.threads < 1
        ):
            raise ParameterError(f"threads must be a positive integer, got {self.threads}")


@dataclass(frozen=True)
class EstimateWithCI:
    """A Monte Carlo estimate with its standard error."""

    mean: float
    std_error: float
    trials_used: int
    seed: int


@dataclass(frozen=True)
class LinkSimulation:
    """One-pass link results: a coverage curve and the ergodic rate."""

    coverage: list[EstimateWithCI]
    aer: EstimateWithCI


# ---------------------------------------------------------------------------
# Chunked deterministic execution
# ---------------------------------------------------------------------------


def _chunk_generator(seed: int, stream: int, chunk_index: int) -> np.random.Generator:
    key = np.array([seed, (stream << 48) | chunk_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _chunk_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, _CHUNK)
    return [_CHUNK] * full + ([rest] if rest else [])


def _resolve_threads(cfg: TrialConfig) -> int:
    if cfg.threads is not None:
        return cfg.threads
    env = os.environ.get("LEOCOV_THREADS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ParameterError(f"LEOCOV_THREADS must be an integer, got {env!r}") from exc
        if value < 1:
            raise ParameterError(f"LEOCOV_THREADS must be positive, got {value}")
        return value
    return 1


def _map_chunks(worker: Callable[[int, int], object], cfg: TrialConfig) -> list[object]:
    """Run ``worker(chunk_index, chunk_size)`` for every chunk, in chunk order."""
    sizes = _chunk_sizes(cfg.trials)
    threads = _resolve_threads(cfg)
    if threads == 1 or len(sizes) == 1:
        return [worker(i, n) for i, n in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(len(sizes)), sizes))


# ---------------------------------------------------------------------------
# Physical trial kernels
# ---------------------------------------------------------------------------


def _distances_from_cos(cos_angle: np.ndarray, params: SystemParams) -> np.ndarray:
    """Slant range between a ground point and a shell point at central angle
    ``arccos(cos_angle)`` (law of cosines on the two radii)."""
    sphere = params.sphere
    h = sphere.satellite_altitude_km
    span = 2.0 * sphere.earth_radius_km * sphere.shell_radius_km
    return np.sqrt(h * h + span * (1.0 - cos_angle))


@dataclass
class _UplinkTrials:
    served: np.ndarray
    signal: np.ndarray
    interference: np.ndarray
    serving_distance: np.ndarray
    inside: np.ndarray | None = None
    interferer_distance: np.ndarray | None = None


def _uplink_chunk(
    gen: np.random.Generator,
    size: int,
    cfg: TrialConfig,
    keep_interferers: bool = False,
) -> _UplinkTrials:
    """Simulate ``size`` uplink trials: nearest-satellite service and
    duty-cycled interference from the other ground devices."""
    p = cfg.params
    geom = p.geometry
    ant = p.antenna
    n_sat = p.n_satellites
    n_dev = p.n_devices

    # Satellites uniform on the shell: the serving one maximizes cos(angle).
    cos_sat = gen.uniform(-1.0, 1.0, (size, n_sat))
    cos_serving = cos_sat.max(axis=1)
    served = cos_serving >= geom.cos_theta3
    serving_distance = _distances_from_cos(cos_serving, p)

    sat_gain = satellite_main_gain(ant.satellite_beamwidth_rad)
    aperture = SPEED_OF_LIGHT_KM_S / (4.0 * math.pi * p.uplink_frequency_hz)
    aperture2 = aperture * aperture
    alpha = p.uplink_path_loss_exponent

    # Other devices uniform on the ground region; only those inside the
    # serving satellite's cap interfere.
    interference = np.zeros(size)
    inside = None
    interferer_distance = None
    if n_dev > 1:
        cos_ground = math.cos(geom.ground_zenith_rad)
        cos_dev = gen.uniform(cos_ground, 1.0, (size, n_dev - 1))
        inside = cos_dev >= geom.cos_theta3
        fading = sample_nakagami_power(p.nakagami, gen, (size, n_dev - 1))
        main_lobe = gen.random((size, n_dev - 1)) < ant.main_lobe_probability
        directivity = np.where(
            main_lobe,
            ant.device_main_gain * sat_gain,
            ant.device_side_gain * sat_gain,
        )
        interferer_distance = _distances_from_cos(cos_dev, p)
        power = (
            p.device_power_w
            * directivity
            * aperture2
            * fading
            * interferer_distance ** (-alpha)
        )
        power *= inside
        if cfg.duty_cycle_mode == "scale":
            interference = p.duty_cycle * power.sum(axis=1)
        else:
            active = gen.random((size, n_dev - 1)) < p.duty_cycle
            interference = (power * active).sum(axis=1)

    target_fading = sample_nakagami_power(p.nakagami, gen, size)
    target_directivity = ant.device_main_gain * sat_gain
    signal = (
        p.device_power_w
        * target_directivity
        * aperture2
        * target_fading
        * serving_distance ** (-alpha)
    )
    return _UplinkTrials(
        served=served,
        signal=signal,
        interference=interference,
        serving_distance=serving_distance,
        inside=inside if keep_interferers else None,
        interferer_distance=interferer_distance if keep_interferers else None,
    )


@dataclass
class _DownlinkTrials:
    served: np.ndarray
    signal: np.ndarray
    interference: np.ndarray
    serving_distance: np.ndarray
    n_visible: np.ndarray


def _downlink_chunk(
    gen: np.random.Generator,
    size: int,
    cfg: TrialConfig,
    condition: bool | None = None,
) -> _DownlinkTrials:
    """Simulate ``size`` downlink trials: a uniformly chosen visible satellite
    serves the earth station; the other visible satellites interfere."""
    p = cfg.params
    geom = p.geometry
    n_sat = p.n_satellites
    if condition is None:
        condition = cfg.condition_on_nonempty_visible_set

    cos_sat = gen.uniform(-1.0, 1.0, (size, n_sat))
    if condition:
        need = np.flatnonzero(~(cos_sat >= geom.cos_theta3).any(axis=1))
        rounds = 0
        while need.size:
            if rounds >= _MAX_RESAMPLE_ROUNDS:
                raise LeocovError(
                    f"failed to draw a visible satellite in {_MAX_RESAMPLE_ROUNDS} "
                    f"resampling rounds; the visible-set probability is too small "
                    f"to condition on"
                )
            cos_sat[need] = gen.uniform(-1.0, 1.0, (need.size, n_sat))
            need = need[~(cos_sat[need] >= geom.cos_theta3).any(axis=1)]
            rounds += 1

    visible = cos_sat >= geom.cos_theta3
    n_visible = visible.sum(axis=1)
    served = n_visible > 0

    vis_row, vis_col = np.nonzero(visible)
    fading = sample_sr_power(p.shadowed_rician, gen, vis_row.size)
    pick = gen.random(size)

    sat_gain = satellite_main_gain(p.antenna.satellite_beamwidth_rad)
    aperture = SPEED_OF_LIGHT_KM_S / (4.0 * math.pi * p.downlink_frequency_hz)
    gain_aperture = sat_gain * p.antenna.earth_station_gain * aperture * aperture
    alpha = p.downlink_path_loss_exponent

    distance = _distances_from_cos(cos_sat[vis_row, vis_col], p)
    unit_power = gain_aperture * fading * distance ** (-alpha)
    row_total = np.bincount(vis_row, weights=unit_power, minlength=size)

    # Uniform pick among each trial's visible satellites.
    chosen_offset = np.minimum(
        (pick * n_visible).astype(np.int64), np.maximum(n_visible - 1, 0)
    )
    row_start = np.searchsorted(vis_row, np.arange(size))
    served_idx = np.flatnonzero(served)
    chosen = row_start[served_idx] + chosen_offset[served_idx]

    signal = np.zeros(size)
    interference = np.zeros(size)
    serving_distance = np.zeros(size)
    signal[served_idx] = p.satellite_power_w * unit_power[chosen]
    interference[served_idx] = p.interfering_satellite_power_w * (
        row_total[served_idx] - unit_power[chosen]
    )
    serving_distance[served_idx] = distance[chosen]
    return _DownlinkTrials(
        served=served,
        signal=signal,
        interference=interference,
        serving_distance=serving_distance,
        n_visible=n_visible,
    )


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------


@dataclass
class _Partial:
    covered: list[int]
    rate_sum: float
    rate_sq_sum: float
    used: int


def _reduce_trials(
    served: np.ndarray,
    signal: np.ndarray,
    interference: np.ndarray,
    thresholds: Sequence[float],
    noise: float,
    all_trials_count: bool,
) -> _Partial:
    """Coverage counts at every threshold plus rate moments for one chunk.

    ``all_trials_count`` selects the estimand population: every trial (uplink
    convention — unserved trials count as uncovered and contribute zero rate)
    or only the served trials (downlink drop convention).
    """
    denominator = interference + noise
    covered = [
        int(np.count_nonzero(served & (signal > t * denominator))) for t in thresholds
    ]
    safe = np.where(denominator > 0.0, denominator, 1.0)
    sinr = np.where(denominator > 0.0, signal / safe, np.inf)
    rate = np.where(served, np.log2(1.0 + sinr), 0.0)
    if all_trials_count:
        used = served.size
    else:
        rate = rate[served]
        used = int(np.count_nonzero(served))
    return _Partial(
        covered=covered,
        rate_sum=float(np.sum(rate)),
        rate_sq_sum=float(np.sum(rate * rate)),
        used=used,
    )


def _combine(partials: list[_Partial], n_thresholds: int, seed: int) -> LinkSimulation:
    used = sum(part.used for part in partials)
    if used == 0:
        raise LeocovError(
            "no trial had a visible satellite; cannot estimate the conditional metric"
        )
    coverage = []
    for j in range(n_thresholds):
        count = sum(part.covered[j] for part in partials)
        mean = count / used
        std_error = math.sqrt(mean * (1.0 - mean) / used)
        coverage.append(EstimateWithCI(mean, std_error, used, seed))
    rate_sum = math.fsum(part.rate_sum for part in partials)
    rate_sq = math.fsum(part.rate_sq_sum for part in partials)
    mean_rate = rate_sum / used
    if used > 1 and math.isfinite(mean_rate):
        variance = max(rate_sq - used * mean_rate * mean_rate, 0.0) / (used - 1)
        rate_se = math.sqrt(variance / used)
    else:
        rate_se = 0.0
    aer = EstimateWithCI(mean_rate, rate_se, used, seed)
    return LinkSimulation(coverage=coverage, aer=aer)


def _simulate_link(
    link: str, thresholds: Sequence[float], cfg: TrialConfig
) -> LinkSimulation:
    thresholds = list(thresholds)
    noise = cfg.params.noise_power_w if cfg.noise_in_sinr else 0.0

    if link == "ts":
        def worker(index: int, size: int) -> _Partial:
            gen = _chunk_generator(cfg.seed, _STREAM_TS, index)
            trials = _uplink_chunk(gen, size, cfg)
            return _reduce_trials(
                trials.served,
                trials.signal,
                trials.interference,
                thresholds,
                noise,
                all_trials_count=True,
            )

    elif link == "ses":
        all_trials = cfg.condition_on_nonempty_visible_set

        def worker(index: int, size: int) -> _Partial:
            gen = _chunk_generator(cfg.seed, _STREAM_SES, index)
            trials = _downlink_chunk(gen, size, cfg)
            return _reduce_trials(
                trials.served,
                trials.signal,
                trials.interference,
                thresholds,
                noise,
                all_trials_count=all_trials,
            )

    else:
        raise ParameterError(f"unknown link {link!r}; expected 'ts' or 'ses'")

    partials = _map_chunks(worker, cfg)
    return _combine(partials, len(thresholds), cfg.seed)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def simulate_link_ts(
    thresholds: Sequence[float], cfg: TrialConfig
) -> LinkSimulation:
    """Coverage curve and ergodic rate of the uplink from one trial pass."""
    return _simulate_link("ts", thresholds, cfg)


def simulate_link_ses(
    thresholds: Sequence[float], cfg: TrialConfig
) -> LinkSimulation:
    """Coverage curve and ergodic rate of the downlink from one trial pass."""
    return _simulate_link("ses", thresholds, cfg)


def simulate_coverage_curve_ts(
    thresholds: Sequence[float], cfg: TrialConfig
) -> list[EstimateWithCI]:
    """Uplink coverage probability at each SINR threshold."""
    return simulate_link_ts(thresholds, cfg).coverage


def simulate_coverage_curve_ses(
    thresholds: Sequence[float], cfg: TrialConfig
) -> list[EstimateWithCI]:
    """Downlink coverage probability at each SINR threshold."""
    return simulate_link_ses(thresholds, cfg).coverage


def simulate_coverage_ts(threshold_linear: float, cfg: TrialConfig) -> EstimateWithCI:
    """Uplink coverage probability at one SINR threshold."""
    return simulate_coverage_curve_ts([threshold_linear], cfg)[0]


def simulate_coverage_ses(threshold_linear: float, cfg: TrialConfig) -> EstimateWithCI:
    """Downlink coverage probability at one SINR threshold, conditioned on a
    nonempty visible set (dropped or resampled per the configuration)."""
    return simulate_coverage_curve_ses([threshold_linear], cfg)[0]


def simulate_aer_ts(cfg: TrialConfig) -> EstimateWithCI:
    """Average uplink ergodic rate; unserved trials contribute zero rate."""
    return simulate_link_ts([], cfg).aer


def simulate_aer_ses(cfg: TrialConfig) -> EstimateWithCI:
    """Average downlink ergodic rate over trials with a visible satellite."""
    return simulate_link_ses([], cfg).aer


def simulate_coverage_e2e(
    threshold_linear: float, cfg: TrialConfig, mode: str = "product"
) -> EstimateWithCI:
    """End-to-end coverage probability at one threshold.

    ``mode="product"`` multiplies the two independent per-link estimates and
    propagates their standard errors; ``mode="joint"`` simulates both links
    inside each trial (on dedicated random streams), resampling empty skies
    so every trial carries a downlink, and requires both links to clear the
    threshold.
    """
    if mode == "product":
        up = simulate_coverage_ts(threshold_linear, cfg)
        down = simulate_coverage_ses(threshold_linear, cfg)
        mean = up.mean * down.mean
        std_error = math.sqrt(
            (up.mean * down.std_error) ** 2
            + (down.mean * up.std_error) ** 2
            + (up.std_error * down.std_error) ** 2
        )
        return EstimateWithCI(mean, std_error, min(up.trials_used, down.trials_used), cfg.seed)
    if mode != "joint":
        raise ParameterError(f"unknown end-to-end mode {mode!r}; expected 'product' or 'joint'")

    noise = cfg.params.noise_power_w if cfg.noise_in_sinr else 0.0

    def worker(index: int, size: int) -> tuple[int, int]:
        gen_up = _chunk_generator(cfg.seed, _STREAM_JOINT_TS, index)
        gen_down = _chunk_generator(cfg.seed, _STREAM_JOINT_SES, index)
        up = _uplink_chunk(gen_up, size, cfg)
        down = _downlink_chunk(gen_down, size, cfg, condition=True)
        up_ok = up.served & (up.signal > threshold_linear * (up.interference + noise))
        down_ok = down.served & (
            down.signal > threshold_linear * (down.interference + noise)
        )
        both = int(np.count_nonzero(up_ok & down_ok))
        return both, int(np.count_nonzero(down.served))

    partials = _map_chunks(worker, cfg)
    used = sum(part[1] for part in partials)
    if used == 0:
        raise LeocovError(
            "no trial had a visible satellite; cannot estimate the conditional metric"
        )
    count = sum(part[0] for part in partials)
    mean = count / used
    std_error = math.sqrt(mean * (1.0 - mean) / used)
    return EstimateWithCI(mean, std_error, used, cfg.seed)


def sample_trial_records(
    link: str, cfg: TrialConfig, max_interferer_distances: int = 0
) -> dict[str, np.ndarray]:
    """Per-trial diagnostic columns for distribution-level validation.

    Uplink records carry the service flag, serving distance, interferer count
    and SINR, plus the first ``max_interferer_distances`` interferer distances
    (zero-padded, in device order).  Downlink records carry the service flag,
    visible-satellite count, serving distance, and SINR.
    """
    if link not in ("ts", "ses"):
        raise ParameterError(f"unknown link {link!r}; expected 'ts' or 'ses'")
    noise = cfg.params.noise_power_w if cfg.noise_in_sinr else 0.0

    def finite_sinr(signal: np.ndarray, interference: np.ndarray) -> np.ndarray:
        denominator = interference + noise
        safe = np.where(denominator > 0.0, denominator, 1.0)
        return np.where(denominator > 0.0, signal / safe, np.inf)

    if link == "ts":
        def worker(index: int, size: int) -> dict[str, np.ndarray]:
            gen = _chunk_generator(cfg.seed, _STREAM_TS, index)
            trials = _uplink_chunk(gen, size, cfg, keep_interferers=True)
            out = {
                "served": trials.served.copy(),
                "serving_distance_km": trials.serving_distance,
                "sinr_linear": finite_sinr(trials.signal, trials.interference),
            }
            if trials.inside is None:
                out["n_interferers"] = np.zeros(size, dtype=np.int64)
                first = np.zeros((size, max_interferer_distances))
            else:
                out["n_interferers"] = trials.inside.sum(axis=1).astype(np.int64)
                first = np.zeros((size, max_interferer_distances))
                for i in range(size):
                    idx = np.flatnonzero(trials.inside[i])[:max_interferer_distances]
                    first[i, : idx.size] = trials.interferer_distance[i, idx]
            for j in range(max_interferer_distances):
                out[f"interferer_distance_{j + 1}_km"] = first[:, j]
            return out

    else:
        def worker(index: int, size: int) -> dict[str, np.ndarray]:
            gen = _chunk_generator(cfg.seed, _STREAM_SES, index)
            trials = _downlink_chunk(gen, size, cfg)
            return {
                "served": trials.served.copy(),
                "n_visible": trials.n_visible.astype(np.int64),
                "serving_distance_km": trials.serving_distance,
                "sinr_linear": finite_sinr(trials.signal, trials.interference),
            }

    chunks = _map_chunks(worker, cfg)
    keys = chunks[0].keys()
    return {key: np.concatenate([chunk[key] for chunk in chunks]) for key in keys}
