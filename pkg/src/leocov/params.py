"""The shared parameter set consumed by both analysis and simulation.

``SystemParams`` is deliberately flat and frozen: both the closed-form
analysis and the Monte Carlo engine read the same instance, which is what
makes their cross-validation meaningful.  Use :func:`dataclasses.replace`
to derive variants.

Units: km for lengths, Hz for frequencies, W for powers, radians for angles;
antenna gains are linear ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .channel import AntennaPattern, NakagamiParams, ShadowedRicianParams
from .errors import ParameterError
from .geometry import LinkGeometry, SphereModel, link_geometry

__all__ = ["SystemParams", "default_params"]


@dataclass(frozen=True)
class SystemParams:
    """Full description of the ground region, constellation, and radio links."""

    sphere: SphereModel
    coverage_radius_km: float
    n_devices: int
    n_satellites: int
    antenna: AntennaPattern
    nakagami: NakagamiParams
    shadowed_rician: ShadowedRicianParams
    duty_cycle: float
    device_power_w: float
    satellite_power_w: float
    interfering_satellite_power_w: float
    uplink_frequency_hz: float
    downlink_frequency_hz: float
    uplink_path_loss_exponent: float
    downlink_path_loss_exponent: float
    noise_power_w: float

    def __post_init__(self) -> None:
        if not isinstance(self.n_devices, int) or isinstance(self.n_devices, bool) or self.n_devices < 1:
            raise ParameterError(f"n_devices must be an integer >= 1, got {self.n_devices!r}")
        if (
            not isinstance(self.n_satellites, int)
            or isinstance(self.n_satellites, bool)
            or self.n_satellites < 1
        ):
            raise ParameterError(
                f"n_satellites must be an integer >= 1, got {self.n_satellites!r}"
            )
        if not (self.coverage_radius_km > 0.0):
            raise ParameterError(
                f"coverage_radius_km must be positive, got {self.coverage_radius_km}"
            )
        if not (0.0 < self.duty_cycle <= 1.0):
            raise ParameterError(f"duty_cycle must lie in (0, 1], got {self.duty_cycle}")
        for name in (
            "device_power_w",
            "satellite_power_w",
            "interfering_satellite_power_w",
            "uplink_frequency_hz",
            "downlink_frequency_hz",
        ):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ParameterError(f"{name} must be positive, got {value}")
        for name in ("uplink_path_loss_exponent", "downlink_path_loss_exponent"):
            value = getattr(self, name)
            if not (value >= 0.0):
                raise ParameterError(f"{name} must be nonnegative, got {value}")
        if not (self.noise_power_w >= 0.0):
            raise ParameterError(
                f"noise_power_w must be nonnegative, got {self.noise_power_w}"
            )

    @cached_property
    def geometry(self) -> LinkGeometry:
        """Derived cap/visibility constants for this beamwidth and region."""
        return link_geometry(
            self.sphere, self.antenna.satellite_beamwidth_rad, self.coverage_radius_km
        )


def default_params() -> SystemParams:
    """Reference configuration: a dense IoT region under a 400 km shell."""
    return SystemParams(
        sphere=SphereModel(satellite_altitude_km=400.0),
        coverage_radius_km=200.0,
        n_devices=5000,
        n_satellites=3000,
        antenna=AntennaPattern(
            device_main_gain=100.0,          # 20 dBi
            device_side_gain=1.0,            # 0 dBi
            device_threshold_angle_rad=math.radians(60.0),
            satellite_beamwidth_rad=math.radians(25.0),
            earth_station_gain=10.0**4.3,    # 43 dBi
        ),
        nakagami=NakagamiParams(m=2),
        shadowed_rician=ShadowedRicianParams(
            half_scatter_power=0.158,
            shadowing_order=1.0,
            los_power=0.1,
        ),
        duty_cycle=0.001,
        device_power_w=2.0,
        satellite_power_w=10.0,
        interfering_satellite_power_w=1.0,
        uplink_frequency_hz=0.9e9,
        downlink_frequency_hz=20.0e9,
        uplink_path_loss_exponent=2.0,
        downlink_path_loss_exponent=2.0,
        noise_power_w=10.0**-12.8,
    )
