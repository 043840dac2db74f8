import math

import numpy as np
import pytest
from scipy.integrate import simpson

from mesofringe.doubleslit import BeamParams, Experiment, far_field_intensity
from mesofringe.emission import decay_rate
from mesofringe.foundation import CONSTANTS, sinc
from mesofringe.presets import experiment_preset
from mesofringe.visibility import (
    DecoherenceScenario,
    ResolutionError,
    decohered_intensity_approx,
    decohered_intensity_exact,
    decohered_pattern,
    exact_angular_average,
    extract_visibility,
    visibility_closed,
    visibility_surface,
)

VIENNA = experiment_preset("vienna")


def make_experiment(x_over_dx: float) -> Experiment:
    """Vienna geometry retuned so the period-to-spread ratio is as given."""
    period = VIENNA.fringe_period
    beam = BeamParams.for_target_spread(
        VIENNA.beam.mass, VIENNA.beam.speed, period / x_over_dx, VIENNA.flight_time
    )
    return Experiment(VIENNA.geometry, beam, flight_time_override=VIENNA.flight_time)


def make_scenario(gamma_t0, d_over_lambda, x_over_dx=0.4) -> DecoherenceScenario:
    return DecoherenceScenario.from_presentation(
        make_experiment(x_over_dx), gamma_t0, d_over_lambda
    )


class TestClosedForm:
    def test_no_emission_gives_unity(self):
        for dl in np.linspace(0.0, 3.0, 100):
            assert visibility_closed(0.0, float(dl)) == pytest.approx(1.0, abs=1e-12)

    def test_long_wavelength_gives_unity(self):
        for gt in np.linspace(0.0, 10.0, 100):
            assert visibility_closed(float(gt), 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_fast_decay_limit_is_sinc(self):
        for dl in np.linspace(0.0, 3.0, 100):
            expected = sinc(2.0 * math.pi * float(dl))
            assert visibility_closed(700.0, float(dl)) == pytest.approx(
                expected, abs=1e-12
            )

    def test_anomalous_vanishing_point(self):
        assert abs(visibility_closed(2.0, 0.84)) <= 0.01
        assert visibility_closed(2.0, 0.84) == pytest.approx(-0.0029894167, abs=1e-9)

    def test_nonmonotone_in_decay_strength(self):
        middle = abs(visibility_closed(2.0, 0.84))
        assert middle < abs(visibility_closed(1.0, 0.84))
        assert middle < abs(visibility_closed(3.0, 0.84))

    def test_short_wavelength_plateau(self):
        # once the sinc factor is small only the survivors interfere; the
        # residual is bounded by the 1/(2 pi d/lambda) sidelobe envelope
        for dl in (5.2, 12.25, 40.1):
            bound = 1.0 / (2.0 * math.pi * dl) + 1e-12
            assert abs(visibility_closed(1.5, dl) - math.exp(-1.5)) <= bound

    def test_bounded_by_one(self):
        rng = np.random.default_rng(11)
        gt = rng.uniform(0.0, 20.0, 500)
        dl = rng.uniform(0.0, 10.0, 500)
        for g, d in zip(gt, dl):
            v = visibility_closed(float(g), float(d))
            assert abs(v) <= 1.0

    def test_lies_between_sinc_and_one(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            g = float(rng.uniform(0.0, 8.0))
            d = float(rng.uniform(0.0, 4.0))
            v = visibility_closed(g, d)
            lo = min(1.0, sinc(2.0 * math.pi * d))
            assert lo - 1e-12 <= v <= 1.0 + 1e-12

    def test_rejects_negative_decay(self):
        with pytest.raises(ValueError):
            visibility_closed(-0.1, 1.0)


class TestScenario:
    def test_recoil_identity(self):
        # 2 pi vbar t0 / X equals omega0 d / c by construction
        sc = make_scenario(1.0, 0.84)
        lhs = 2.0 * math.pi * sc.recoil_drift / sc.experiment.fringe_period
        rhs = (
            sc.emitter.omega0 * sc.experiment.geometry.separation / CONSTANTS.c
        )
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_drift_is_period_times_wavelength_ratio(self):
        sc = make_scenario(1.0, 0.84)
        assert sc.recoil_drift == pytest.approx(
            0.84 * sc.experiment.fringe_period, rel=1e-12
        )

    def test_presentation_ratio_round_trip(self):
        sc = make_scenario(1.0, 0.5, x_over_dx=0.4)
        assert sc.x_over_dx == pytest.approx(0.4, rel=1e-9)
        assert sc.d_over_lambda == pytest.approx(0.5, rel=1e-12)

    def test_emitter_consistent_with_gamma_t0(self):
        sc = make_scenario(2.0, 0.84)
        assert decay_rate(sc.emitter) * sc.experiment.flight_time == pytest.approx(
            2.0, rel=1e-12
        )

    def test_rejects_negative_gamma_t0(self):
        with pytest.raises(ValueError):
            make_scenario(-1.0, 0.5)


class TestAngularAverage:
    def test_zero_drift_collapses_to_far_field(self):
        # an emitter with a microscopic recoil drift leaves the pattern intact
        sc = make_scenario(1.0, 1e-9)
        exp = sc.experiment
        for x in (0.0, 0.3, -1.2):
            xm = x * exp.spread_at_screen()
            assert exact_angular_average(xm, sc) == pytest.approx(
                far_field_intensity(xm, exp.fringe_period, exp.spread_at_screen()),
                rel=1e-9,
            )

    def test_half_period_drift_washes_out_fringes(self):
        # vbar t0 = X/2 averages the cosine over a full cycle; with a wide
        # envelope the result is the bare envelope
        sc = make_scenario(1.0, 0.5, x_over_dx=0.1)
        exp = sc.experiment
        spread = exp.spread_at_screen()
        period = exp.fringe_period
        envelope_peak = 1.0 / math.sqrt(2.0 * math.pi * spread * spread)
        at_max = exact_angular_average(0.0, sc)
        at_min = exact_angular_average(0.5 * period, sc)
        # the free pattern varies by 2x envelope between these points
        assert abs(at_max - at_min) < 0.01 * envelope_peak
        assert at_max == pytest.approx(envelope_peak, rel=0.02)

    def test_flat_envelope_form_matches_quadrature(self):
        # at X/dx = 0.4 the factored form tracks the full average to within
        # a couple of percent of the peak
        sc = make_scenario(1.0, 0.25, x_over_dx=0.4)
        exp = sc.experiment
        spread = exp.spread_at_screen()
        period = exp.fringe_period
        s = sinc(2.0 * math.pi * sc.d_over_lambda)
        xs = np.linspace(-3.0 * spread, 3.0 * spread, 241)
        exact = np.array([exact_angular_average(float(x), sc) for x in xs])
        u = xs / spread
        envelope = np.exp(-0.5 * u * u) / (spread * math.sqrt(2.0 * math.pi))
        approx = envelope * (1.0 + s * np.cos(2.0 * math.pi * xs / period))
        peak = approx.max()
        assert np.abs(exact - approx).max() <= 0.02 * peak


class TestDecoheredIntensity:
    def test_no_decay_reduces_to_free_pattern(self):
        sc = make_scenario(0.0, 2.0)
        exp = sc.experiment
        for x in np.linspace(-2.0, 2.0, 9) * exp.spread_at_screen():
            free = far_field_intensity(
                float(x), exp.fringe_period, exp.spread_at_screen()
            )
            assert decohered_intensity_exact(float(x), sc) == free
            assert decohered_intensity_approx(float(x), sc) == pytest.approx(
                free, rel=1e-12
            )

    def test_full_decay_is_pure_average(self):
        sc = make_scenario(50.0, 0.3)
        x = 0.7 * sc.experiment.spread_at_screen()
        assert decohered_intensity_exact(x, sc) == pytest.approx(
            exact_angular_average(x, sc), rel=1e-10
        )

    def test_fringe_inversion_minimum_at_centre(self):
        # negative visibility puts minima where the free pattern has maxima
        sc = make_scenario(6.0, 0.84)
        v = visibility_closed(6.0, 0.84)
        assert v < -0.1
        exp = sc.experiment
        period = exp.fringe_period
        centre = decohered_intensity_approx(0.0, sc)
        off = decohered_intensity_approx(0.5 * period, sc)
        assert centre < off

    def test_exact_tracks_approx_in_long_wavelength_regime(self):
        sc = make_scenario(1.0, 0.2, x_over_dx=0.4)
        exp = sc.experiment
        spread = exp.spread_at_screen()
        xs = np.linspace(-3.0 * spread, 3.0 * spread, 201)
        exact = np.array([decohered_intensity_exact(float(x), sc) for x in xs])
        approx = np.array([decohered_intensity_approx(float(x), sc) for x in xs])
        assert np.abs(exact - approx).max() <= 0.02 * approx.max()

    def test_grid_pattern_matches_scalar_path(self):
        sc = make_scenario(1.5, 0.6)
        exp = sc.experiment
        xs = np.linspace(-2.0, 2.0, 41) * exp.spread_at_screen()
        pattern = decohered_pattern(sc, xs, path="exact")
        scalar = np.array([decohered_intensity_exact(float(x), sc) for x in xs])
        assert np.abs(pattern.intensity - scalar).max() <= 1e-8 * scalar.max()

    def test_exact_pattern_normalized(self):
        # Simpson integral over +-8 spreads; the tails carry < 1e-15
        sc = make_scenario(2.0, 0.84)
        spread = sc.experiment.spread_at_screen()
        xs = np.linspace(-8.0 * spread, 8.0 * spread, 4097)
        pattern = decohered_pattern(sc, xs, path="exact")
        total = simpson(pattern.intensity, x=xs)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_approx_pattern_normalized(self):
        sc = make_scenario(1.0, 0.5)
        spread = sc.experiment.spread_at_screen()
        xs = np.linspace(-8.0 * spread, 8.0 * spread, 4097)
        pattern = decohered_pattern(sc, xs, path="approx")
        total = simpson(pattern.intensity, x=xs)
        assert total == pytest.approx(1.0, abs=1e-6)


class TestExtractVisibility:
    def test_full_contrast(self):
        sc = make_scenario(0.0, 1.0)
        pattern = decohered_pattern(sc, path="approx")
        value = extract_visibility(pattern, sc.experiment.fringe_period)
        assert value == pytest.approx(1.0, abs=0.02)

    def test_zero_contrast(self):
        # at the sinc node with everything emitted the fringes are gone
        sc = make_scenario(40.0, 0.5)
        pattern = decohered_pattern(sc, path="approx")
        value = extract_visibility(pattern, sc.experiment.fringe_period)
        assert value <= 0.02

    @pytest.mark.parametrize("target", [0.2, 0.5, 0.8])
    def test_round_trip(self, target):
        # at the sinc node the closed form reduces to exp(-gamma t0), so the
        # target contrast pins gamma t0 = -ln(target)
        sc = make_scenario(-math.log(target), 0.5)
        pattern = decohered_pattern(sc, path="approx")
        value = extract_visibility(pattern, sc.experiment.fringe_period)
        assert value == pytest.approx(target, abs=0.03)

    def test_inverted_fringes_report_magnitude(self):
        sc = make_scenario(6.0, 0.84)
        pattern = decohered_pattern(sc, path="approx")
        value = extract_visibility(pattern, sc.experiment.fringe_period)
        assert value == pytest.approx(
            abs(visibility_closed(6.0, 0.84)), abs=0.03
        )

    def test_rejects_narrow_grid(self):
        sc = make_scenario(1.0, 0.5)
        period = sc.experiment.fringe_period
        xs = np.linspace(-0.6 * period, 0.6 * period, 101)
        pattern = decohered_pattern(sc, xs, path="approx")
        with pytest.raises(ResolutionError):
            extract_visibility(pattern, period)

    def test_rejects_coarse_grid(self):
        sc = make_scenario(1.0, 0.5)
        period = sc.experiment.fringe_period
        xs = np.linspace(-2.0 * period, 2.0 * period, 30)
        pattern = decohered_pattern(sc, xs, path="approx")
        with pytest.raises(ResolutionError):
            extract_visibility(pattern, period)


class TestSurface:
    def test_zero_decay_row_is_unity(self):
        surface = visibility_surface([0.0, 1.0], np.linspace(0.0, 3.0, 31))
        assert np.allclose(surface.values[0], 1.0, atol=1e-12)

    def test_sinc_node_columns_equal_survival(self):
        gts = np.array([0.5, 1.0, 2.0, 3.0])
        dls = np.array([0.5, 1.0, 1.5, 2.0])
        surface = visibility_surface(gts, dls)
        for j in range(dls.size):
            assert np.allclose(
                surface.values[:, j], np.exp(-gts), atol=1e-12
            )

    def test_anomalous_region(self):
        surface = visibility_surface([3.0], [0.55, 0.75])
        assert abs(surface.values[0, 1]) > abs(surface.values[0, 0])

    def test_single_cell(self):
        surface = visibility_surface([2.0], [0.84])
        g, d, v = surface.rows()
        assert g.size == 1
        assert v[0] == pytest.approx(visibility_closed(2.0, 0.84), rel=1e-14)

    def test_row_major_csv(self):
        surface = visibility_surface([0.0, 1.0], [0.1, 0.2, 0.3])
        lines = surface.to_csv().strip().split("\n")
        assert lines[0] == "gamma_t0,d_over_lambda,visibility"
        assert len(lines) == 7
        first = [float(v) for v in lines[1].split(",")]
        fourth = [float(v) for v in lines[4].split(",")]
        assert first[:2] == [0.0, 0.1]
        assert fourth[:2] == [1.0, 0.1]

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            visibility_surface([], [0.1])
