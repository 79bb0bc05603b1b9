"""Tests for antenna gains, path loss, and the two fading families."""
from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.stats

import _oracle_values as ov
from leocov.channel import (
    AntennaPattern,
    NakagamiParams,
    ShadowedRicianParams,
    interferer_directivity_law,
    nakagami_ccdf_alzer,
    nakagami_power_pdf,
    path_loss,
    sample_nakagami_power,
    sample_sr_power,
    satellite_main_gain,
    sr_mgf,
    sr_power_cdf,
    sr_power_pdf,
    sr_series_coefficient,
)
from leocov.errors import ParameterError
from leocov.numerics import integrate, integrate_semi_infinite

SR_DEFAULT = ShadowedRicianParams(half_scatter_power=0.158, shadowing_order=1.0, los_power=0.1)
SR_Q2 = ShadowedRicianParams(half_scatter_power=0.126, shadowing_order=2.0, los_power=0.835)
SR_Q25 = ShadowedRicianParams(half_scatter_power=0.251, shadowing_order=2.5, los_power=0.279)


def rel_err(got: float, want: float) -> float:
    return abs(got - want) / max(abs(want), 1e-300)


class TestSatelliteMainGain:
    def test_closed_forms(self):
        assert satellite_main_gain(math.pi) == pytest.approx(2.0, rel=1e-14)
        assert satellite_main_gain(2.0 * math.pi / 3.0) == pytest.approx(4.0, rel=1e-12)

    def test_default_beamwidth(self):
        assert rel_err(satellite_main_gain(math.radians(25.0)), ov.SAT_MAIN_GAIN_25DEG) < 1e-12

    def test_decreasing(self):
        degs = np.linspace(5.0, 180.0, 30)
        vals = [satellite_main_gain(math.radians(float(d))) for d in degs]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_domain_error(self):
        with pytest.raises(ParameterError):
            satellite_main_gain(0.0)


class TestPathLoss:
    def test_power_law(self):
        base = path_loss(2e9, 2.0, 400.0)
        assert path_loss(2e9, 2.0, 800.0) == pytest.approx(base / 4.0, rel=1e-12)

    def test_exponent_zero(self):
        assert path_loss(2e9, 0.0, 123.0) == path_loss(2e9, 0.0, 777.0)

    @pytest.mark.parametrize(
        "f_hz, r_km, expected",
        [
            (0.9e9, 1000.0, ov.PATH_LOSS_900MHZ_1000KM),
            (20e9, 405.0, ov.PATH_LOSS_20GHZ_405KM),
        ],
    )
    def test_frozen_values(self, f_hz, r_km, expected):
        assert rel_err(path_loss(f_hz, 2.0, r_km), expected) < 1e-12

    def test_free_space_db_identity(self):
        # -10 log10(pl) equals the textbook free-space loss 20 log10(4 pi r f / c)
        # with r in meters and c in m/s.
        f_hz, r_km = 2e9, 400.0
        pl_db = -10.0 * math.log10(path_loss(f_hz, 2.0, r_km))
        fspl_db = 20.0 * math.log10(4.0 * math.pi * r_km * 1e3 * f_hz / 299792458.0)
        assert pl_db == pytest.approx(fspl_db, abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            path_loss(2e9, 2.0, 0.0)
        with pytest.raises(ParameterError):
            path_loss(0.0, 2.0, 100.0)


class TestNakagami:
    def test_params_validation(self):
        assert NakagamiParams(m=1).m == 1
        with pytest.raises(ParameterError):
            NakagamiParams(m=0)
        with pytest.raises(ParameterError):
            NakagamiParams(m=2.5)  # type: ignore[arg-type]

    @pytest.mark.parametrize(
        "m, expected",
        [(2, ov.ALZER_ETA_2), (3, ov.ALZER_ETA_3), (5, ov.ALZER_ETA_5)],
    )
    def test_alzer_eta(self, m, expected):
        assert rel_err(NakagamiParams(m=m).alzer_eta, expected) < 1e-12

    def test_alzer_eta_unity_at_one(self):
        assert NakagamiParams(m=1).alzer_eta == pytest.approx(1.0, abs=1e-15)

    def test_pdf_rayleigh_power(self):
        p = NakagamiParams(m=1)
        for x in (0.1, 1.0, 3.0):
            assert rel_err(nakagami_power_pdf(x, p), math.exp(-x)) < 1e-12

    def test_pdf_closed_form_m2(self):
        p = NakagamiParams(m=2)
        assert rel_err(nakagami_power_pdf(0.5, p), 2.0 * math.exp(-1.0)) < 1e-12

    def test_unit_mean(self):
        for m in (1, 2, 5):
            p = NakagamiParams(m=m)
            mean = integrate_semi_infinite(lambda x: x * nakagami_power_pdf(x, p))
            assert mean == pytest.approx(1.0, rel=1e-7)

    def test_ccdf_alzer_trivials(self):
        p = NakagamiParams(m=3)
        assert nakagami_ccdf_alzer(0.0, p) == 1.0
        p1 = NakagamiParams(m=1)
        for psi in (0.2, 1.0, 4.0):
            assert rel_err(nakagami_ccdf_alzer(psi, p1), math.exp(-psi)) < 1e-12

    def test_ccdf_alzer_closed_form_m2(self):
        p = NakagamiParams(m=2)
        eta = math.sqrt(2.0)
        want = 1.0 - (1.0 - math.exp(-eta)) ** 2
        assert rel_err(nakagami_ccdf_alzer(1.0, p), want) < 1e-12

    def test_ccdf_alzer_upper_bounds_exact(self):
        # The bound-based CCDF dominates the exact Gamma CCDF everywhere.
        for m in (1, 2, 3, 5):
            p = NakagamiParams(m=m)
            exact = scipy.stats.gamma(a=m, scale=1.0 / m)
            for psi in np.linspace(0.01, 6.0, 60):
                assert nakagami_ccdf_alzer(float(psi), p) >= exact.sf(psi) - 1e-12


class TestShadowedRicianParams:
    @pytest.mark.parametrize(
        "p, kappa, delta, beta",
        [
            (SR_DEFAULT, ov.SR_DEFAULT_KAPPA, ov.SR_DEFAULT_DELTA, ov.SR_DEFAULT_BETA),
            (SR_Q2, ov.SR_Q2_KAPPA, ov.SR_Q2_DELTA, ov.SR_Q2_BETA),
            (SR_Q25, ov.SR_Q25_KAPPA, ov.SR_Q25_DELTA, ov.SR_Q25_BETA),
        ],
    )
    def test_derived_constants(self, p, kappa, delta, beta):
        assert rel_err(p.kappa, kappa) < 1e-12
        assert rel_err(p.delta, delta) < 1e-12
        assert rel_err(p.beta, beta) < 1e-12
        assert p.beta > p.delta

    def test_mean(self):
        assert rel_err(SR_DEFAULT.mean, ov.SR_DEFAULT_MEAN) < 1e-12
        assert rel_err(SR_Q2.mean, ov.SR_Q2_MEAN) < 1e-12

    def test_validation(self):
        with pytest.raises(ParameterError):
            ShadowedRicianParams(half_scatter_power=0.0, shadowing_order=1.0, los_power=0.1)
        with pytest.raises(ParameterError):
            ShadowedRicianParams(half_scatter_power=0.1, shadowing_order=0.0, los_power=0.1)
        with pytest.raises(ParameterError):
            ShadowedRicianParams(half_scatter_power=0.1, shadowing_order=1.0, los_power=-0.1)

    def test_zero_los_allowed(self):
        p = ShadowedRicianParams(half_scatter_power=0.2, shadowing_order=1.5, los_power=0.0)
        assert p.delta == 0.0
        assert p.kappa == pytest.approx(p.beta, rel=1e-12)


class TestSrPdf:
    @pytest.mark.parametrize(
        "p, values",
        [
            (SR_DEFAULT, (ov.SR_DEFAULT_PDF_0_1, ov.SR_DEFAULT_PDF_0_5, ov.SR_DEFAULT_PDF_2_0)),
            (SR_Q2, (ov.SR_Q2_PDF_0_1, ov.SR_Q2_PDF_0_5, ov.SR_Q2_PDF_2_0)),
            (SR_Q25, (ov.SR_Q25_PDF_0_1, ov.SR_Q25_PDF_0_5, ov.SR_Q25_PDF_2_0)),
        ],
    )
    def test_frozen_values(self, p, values):
        for x, want in zip((0.1, 0.5, 2.0), values):
            assert rel_err(sr_power_pdf(x, p), want) < 1e-10

    def test_at_zero(self):
        for p in (SR_DEFAULT, SR_Q2, SR_Q25):
            assert rel_err(sr_power_pdf(0.0, p), p.kappa) < 1e-12

    def test_pure_exponential_when_no_los(self):
        p = ShadowedRicianParams(half_scatter_power=0.2, shadowing_order=1.3, los_power=0.0)
        for x in (0.1, 1.0, 2.5):
            assert rel_err(sr_power_pdf(x, p), p.beta * math.exp(-p.beta * x)) < 1e-12

    def test_normalization(self):
        for p in (SR_DEFAULT, SR_Q2, SR_Q25):
            total = integrate_semi_infinite(lambda x: sr_power_pdf(x, p))
            assert abs(total - 1.0) <= 1e-8

    def test_first_moment(self):
        for p in (SR_DEFAULT, SR_Q25):
            mean = integrate_semi_infinite(lambda x: x * sr_power_pdf(x, p))
            assert mean == pytest.approx(p.mean, rel=1e-7)


class TestSrMgf:
    def test_normalization(self):
        for p in (SR_DEFAULT, SR_Q2, SR_Q25):
            assert sr_mgf(0.0, p) == pytest.approx(1.0, rel=1e-14)

    def test_exponential_case(self):
        p = ShadowedRicianParams(half_scatter_power=0.2, shadowing_order=2.0, los_power=0.0)
        for x in (0.5, 2.0, 10.0):
            assert rel_err(sr_mgf(x, p), 1.0 / (1.0 + 2.0 * 0.2 * x)) < 1e-12

    @pytest.mark.parametrize(
        "p, v05, v37",
        [
            (SR_DEFAULT, ov.SR_DEFAULT_MGF_0_5, ov.SR_DEFAULT_MGF_3_7),
            (SR_Q2, ov.SR_Q2_MGF_0_5, ov.SR_Q2_MGF_3_7),
            (SR_Q25, ov.SR_Q25_MGF_0_5, ov.SR_Q25_MGF_3_7),
        ],
    )
    def test_frozen_values(self, p, v05, v37):
        assert rel_err(sr_mgf(0.5, p), v05) < 1e-10
        assert rel_err(sr_mgf(3.7, p), v37) < 1e-10

    def test_decreasing(self):
        xs = np.linspace(0.0, 20.0, 40)
        vals = [sr_mgf(float(x), SR_Q25) for x in xs]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_matches_numeric_laplace_transform(self):
        # MGF vs direct quadrature of e^{-x t} f(t): 1e-7 on x in [0, 10].
        for p in (SR_DEFAULT, SR_Q25):
            for x in (0.0, 0.5, 1.0, 3.0, 10.0):
                numeric = integrate_semi_infinite(
                    lambda t, _x=x: math.exp(-_x * t) * sr_power_pdf(t, p)
                )
                assert abs(sr_mgf(x, p) - numeric) < 1e-7

    def test_domain_error(self):
        with pytest.raises(ParameterError):
            sr_mgf(-1.0 / (2.0 * 0.158) - 0.01, SR_DEFAULT)


class TestSrSeriesCoefficient:
    def test_k0_is_kappa(self):
        for p in (SR_DEFAULT, SR_Q2, SR_Q25):
            assert rel_err(sr_series_coefficient(0, p), p.kappa) < 1e-12

    def test_integer_q_truncation(self):
        for k in (1, 2, 7):
            assert sr_series_coefficient(k, SR_DEFAULT) == 0.0
        # q = 2 truncates at k = 1.
        assert sr_series_coefficient(1, SR_Q2) != 0.0
        assert sr_series_coefficient(2, SR_Q2) == 0.0

    def test_frozen_values_q25(self):
        for k, want in enumerate(
            (ov.SR_Q25_PSI_0, ov.SR_Q25_PSI_1, ov.SR_Q25_PSI_2, ov.SR_Q25_PSI_3)
        ):
            assert rel_err(sr_series_coefficient(k, SR_Q25), want) < 1e-12

    def test_pdf_reconstruction(self):
        # f(x) = sum_k Psi(k) x^k e^{-(beta-delta) x} reproduces the density.
        p = SR_Q25
        for x in (0.2, 1.0, 3.0):
            series = sum(
                sr_series_coefficient(k, p) * x**k for k in range(40)
            ) * math.exp(-(p.beta - p.delta) * x)
            assert rel_err(series, sr_power_pdf(x, p)) < 1e-10


class TestSrCdf:
    def test_at_zero(self):
        for p in (SR_DEFAULT, SR_Q25):
            assert sr_power_cdf(0.0, p) == 0.0

    def test_exponential_case(self):
        p = ShadowedRicianParams(half_scatter_power=0.3, shadowing_order=1.0, los_power=0.0)
        for x in (0.5, 2.0):
            assert rel_err(sr_power_cdf(x, p), -math.expm1(-p.beta * x)) < 1e-10

    @pytest.mark.parametrize(
        "p, c05, c10",
        [
            (SR_DEFAULT, ov.SR_DEFAULT_CDF_0_5, ov.SR_DEFAULT_CDF_1_0),
            (SR_Q2, ov.SR_Q2_CDF_0_5, ov.SR_Q2_CDF_1_0),
            (SR_Q25, ov.SR_Q25_CDF_0_5, ov.SR_Q25_CDF_1_0),
        ],
    )
    def test_frozen_values(self, p, c05, c10):
        assert rel_err(sr_power_cdf(0.5, p), c05) < 1e-8
        assert rel_err(sr_power_cdf(1.0, p), c10) < 1e-8

    def test_monotone_and_limits(self):
        xs = np.linspace(0.0, 12.0, 60)
        vals = [sr_power_cdf(float(x), SR_Q25) for x in xs]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 0.9999

    def test_consistent_with_pdf(self):
        for x in (0.4, 1.2):
            numeric = integrate(lambda t: sr_power_pdf(t, SR_Q25), 0.0, x)
            assert abs(sr_power_cdf(x, SR_Q25) - numeric) < 1e-8


class TestSamplers:
    def test_determinism(self):
        a = sample_nakagami_power(NakagamiParams(m=2), np.random.default_rng(11), size=100)
        b = sample_nakagami_power(NakagamiParams(m=2), np.random.default_rng(11), size=100)
        assert np.array_equal(a, b)
        c = sample_sr_power(SR_DEFAULT, np.random.default_rng(11), size=100)
        d = sample_sr_power(SR_DEFAULT, np.random.default_rng(11), size=100)
        assert np.array_equal(c, d)

    def test_nakagami_moments(self):
        rng = np.random.default_rng(123)
        x = sample_nakagami_power(NakagamiParams(m=1), rng, size=200_000)
        assert abs(x.mean() - 1.0) < 3.0 * x.std() / math.sqrt(x.size)

    def test_sr_moments(self):
        rng = np.random.default_rng(321)
        x = sample_sr_power(SR_DEFAULT, rng, size=200_000)
        assert abs(x.mean() - SR_DEFAULT.mean) < 3.0 * x.std() / math.sqrt(x.size)

    def test_nakagami_ks(self):
        rng = np.random.default_rng(2024)
        for m in (1, 2):
            x = sample_nakagami_power(NakagamiParams(m=m), rng, size=100_000)
            stat = scipy.stats.kstest(x, scipy.stats.gamma(a=m, scale=1.0 / m).cdf).statistic
            assert stat < 0.01

    def test_sr_ks(self):
        rng = np.random.default_rng(4048)
        for p in (SR_DEFAULT, SR_Q25):
            x = sample_sr_power(p, rng, size=100_000)
            stat = scipy.stats.kstest(x, lambda v, _p=p: [sr_power_cdf(float(t), _p) for t in np.atleast_1d(v)]).statistic
            assert stat < 0.01


class TestDirectivityLaw:
    def make_pattern(self, phi_t_rad: float) -> AntennaPattern:
        return AntennaPattern(
            device_main_gain=100.0,
            device_side_gain=1.0,
            device_threshold_angle_rad=phi_t_rad,
            satellite_beamwidth_rad=math.radians(25.0),
            earth_station_gain=10.0**4.3,
        )

    def test_default_mean(self):
        law = interferer_directivity_law(self.make_pattern(math.radians(60.0)))
        assert abs(sum(law.probabilities) - 1.0) < 1e-15
        assert rel_err(law.mean, ov.DIRECTIVITY_MEAN_DEFAULT) < 1e-12

    def test_degenerate_main_only(self):
        law = interferer_directivity_law(self.make_pattern(2.0 * math.pi))
        assert law.probabilities[0] == 1.0
        assert law.mean == pytest.approx(law.values[0], rel=1e-14)

    def test_mean_matches_sampling(self):
        law = interferer_directivity_law(self.make_pattern(math.radians(60.0)))
        rng = np.random.default_rng(99)
        draws = np.where(
            rng.random(1_000_000) < law.probabilities[0], law.values[0], law.values[1]
        )
        se = draws.std() / 1000.0
        assert abs(draws.mean() - law.mean) < 4.0 * se

    def test_pattern_validation(self):
        with pytest.raises(ParameterError):
            AntennaPattern(
                device_main_gain=1.0,
                device_side_gain=2.0,  # side > main
                device_threshold_angle_rad=1.0,
                satellite_beamwidth_rad=1.0,
                earth_station_gain=1.0,
            )
        with pytest.raises(ParameterError):
            AntennaPattern(
                device_main_gain=2.0,
                device_side_gain=1.0,
                device_threshold_angle_rad=0.0,  # must be > 0
                satellite_beamwidth_rad=1.0,
                earth_station_gain=1.0,
            )
        with pytest.raises(ParameterError):
            AntennaPattern(
                device_main_gain=2.0,
                device_side_gain=1.0,
                device_threshold_angle_rad=1.0,
                satellite_beamwidth_rad=math.pi,  # must be < pi
                earth_station_gain=1.0,
            )
