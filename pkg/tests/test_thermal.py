import math

import numpy as np
import pytest

from mesofringe.foundation import CONSTANTS
from mesofringe.presets import VIENNA_EMITTING_AREA
from mesofringe.thermal import (
    DEFAULT_EMISSIVITY,
    FRAGMENTATION_TEMPERATURE,
    RecoilBudget,
    ThermalSource,
    blackbody_intensity,
    blackbody_photon_flux,
    coherence_ok,
    decoherence_temperature,
    emitted_budget,
    kappa_constant,
    tdec_vs_separation_sweep,
    xi_constant,
)

H = CONSTANTS.h
KB = CONSTANTS.kB

AREA = VIENNA_EMITTING_AREA  # 4 pi r^2 of a 3.5 angstrom sphere
T0_QUOTED = 9.47e-3
T0_SWEEP = 9.53e-3


class TestFluxes:
    def test_quartic_temperature_law(self):
        assert blackbody_intensity(2000.0) == pytest.approx(
            16.0 * blackbody_intensity(1000.0), rel=1e-10
        )

    def test_stefan_boltzmann_constant(self):
        sigma_sb = blackbody_intensity(1.0)
        assert sigma_sb == pytest.approx(5.670374419e-8, rel=1e-3)
        # the identity pi^2 kB^4 / (60 c^2 hbar^3) = sigma_SB holds to CODATA
        assert sigma_sb == pytest.approx(5.670374419e-8, rel=1e-9)

    def test_vanishes_at_low_temperature(self):
        assert blackbody_intensity(1e-6) < 1e-30

    def test_cubic_photon_law(self):
        assert blackbody_photon_flux(600.0) == pytest.approx(
            8.0 * blackbody_photon_flux(300.0), rel=1e-10
        )

    def test_mean_photon_energy(self):
        # J0/Phi0 = (pi^4 / 30 zeta(3)) kB T = 2.701 kB T
        for temperature in (300.0, 2000.0):
            ratio = blackbody_intensity(temperature) / blackbody_photon_flux(temperature)
            assert ratio == pytest.approx(2.7011780329 * KB * temperature, rel=1e-9)

    def test_flux_at_2000K(self):
        assert blackbody_photon_flux(2000.0) == pytest.approx(1.2e25, rel=0.02)

    def test_rejects_nonpositive_temperature(self):
        with pytest.raises(ValueError):
            blackbody_intensity(0.0)
        with pytest.raises(ValueError):
            blackbody_photon_flux(-5.0)


class TestConstants:
    def test_kappa_value(self):
        assert kappa_constant() == pytest.approx(4.85e-24, rel=5e-3)

    def test_kappa_matches_flux_combination(self):
        # J0 A t0 / (c sqrt(Phi0 A t0)) = kappa (A t0)^(1/2) T^(5/2)
        rng = np.random.default_rng(5)
        for _ in range(20):
            area = 10.0 ** rng.uniform(-20, -16)
            t0 = 10.0 ** rng.uniform(-4, -1)
            temperature = rng.uniform(100.0, 4000.0)
            lhs = (
                blackbody_intensity(temperature)
                * area
                * t0
                / (CONSTANTS.c * math.sqrt(blackbody_photon_flux(temperature) * area * t0))
            )
            rhs = kappa_constant() * math.sqrt(area * t0) * temperature**2.5
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_xi_value(self):
        assert xi_constant() == pytest.approx(8.59e-5, rel=5e-3)

    def test_xi_matches_root_of_recoil_equation(self):
        # the temperature solving delta_p(T) = h/(2d) by bisection must equal
        # the closed-form bound
        area, t0, separation = AREA, T0_QUOTED, 100e-9
        target = H / (2.0 * separation)

        def overshoot(temperature):
            return (
                kappa_constant() * math.sqrt(area * t0) * temperature**2.5 - target
            )

        lo, hi = 1.0, 1e5
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if overshoot(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        root = 0.5 * (lo + hi)
        bound = decoherence_temperature(area, t0, separation, 1.0)
        assert bound == pytest.approx(root, rel=1e-3)

    def test_xi_is_h_over_2kappa_power(self):
        assert xi_constant() == pytest.approx(
            (H / (2.0 * kappa_constant())) ** 0.4, rel=1e-12
        )


class TestEmittedBudget:
    def test_random_walk_identity(self):
        # delta_p = delta_E / (c sqrt(n)) for any emissivity
        for emissivity in (1.0, DEFAULT_EMISSIVITY):
            src = ThermalSource(2500.0, AREA, emissivity, T0_QUOTED)
            budget = emitted_budget(src)
            assert budget.momentum_spread == pytest.approx(
                budget.radiated_energy
                / (CONSTANTS.c * math.sqrt(budget.photon_count)),
                rel=1e-12,
            )

    def test_recoil_below_energy_over_c_when_many_photons(self):
        src = ThermalSource(2500.0, AREA, 1.0, T0_QUOTED)
        budget = emitted_budget(src)
        assert budget.photon_count > 1.0
        assert budget.momentum_spread <= budget.radiated_energy / CONSTANTS.c

    def test_photon_count_near_published_estimate(self):
        # half-micron separation sweep conditions: about 8.6 photons
        src = ThermalSource(2000.0, AREA, DEFAULT_EMISSIVITY, T0_SWEEP)
        budget = emitted_budget(src)
        assert budget.photon_count == pytest.approx(8.6, rel=0.15)

    def test_cold_source_emits_nothing(self):
        src = ThermalSource(1e-3, AREA, 1.0, T0_QUOTED)
        budget = emitted_budget(src)
        assert budget.radiated_energy < 1e-40
        assert budget.photon_count < 1e-30
        assert budget.momentum_spread < 1e-40

    def test_momentum_power_law(self):
        a = emitted_budget(ThermalSource(1000.0, AREA, 1.0, T0_QUOTED))
        b = emitted_budget(ThermalSource(2000.0, AREA, 1.0, T0_QUOTED))
        assert b.momentum_spread == pytest.approx(
            2.0**2.5 * a.momentum_spread, rel=1e-10
        )


class TestDecoherenceTemperature:
    def test_bare_blackbody_bound(self):
        assert decoherence_temperature(AREA, T0_QUOTED, 100e-9, 1.0) == pytest.approx(
            500.0, rel=0.02
        )

    def test_emissivity_corrected_bound(self):
        assert decoherence_temperature(
            AREA, T0_QUOTED, 100e-9, DEFAULT_EMISSIVITY
        ) == pytest.approx(3700.0, rel=0.02)

    def test_half_micron_bound(self):
        assert decoherence_temperature(
            AREA, T0_SWEEP, 0.5e-6, DEFAULT_EMISSIVITY
        ) == pytest.approx(2000.0, rel=0.05)

    def test_emissivity_scaling_exact(self):
        base = decoherence_temperature(AREA, T0_QUOTED, 100e-9, 1.0)
        corrected = decoherence_temperature(AREA, T0_QUOTED, 100e-9, 4.5e-5)
        assert corrected == 4.5e-5**-0.2 * base

    def test_power_laws(self):
        base = decoherence_temperature(AREA, T0_QUOTED, 100e-9, 1.0)
        assert decoherence_temperature(
            AREA, T0_QUOTED, 1000e-9, 1.0
        ) == pytest.approx(base * 10.0**-0.4, rel=1e-10)
        assert decoherence_temperature(
            10.0 * AREA, T0_QUOTED, 100e-9, 1.0
        ) == pytest.approx(base * 10.0**-0.2, rel=1e-10)
        assert decoherence_temperature(
            AREA, 10.0 * T0_QUOTED, 100e-9, 1.0
        ) == pytest.approx(base * 10.0**-0.2, rel=1e-10)

    def test_rejects_bad_emissivity(self):
        with pytest.raises(ValueError):
            decoherence_temperature(AREA, T0_QUOTED, 100e-9, 0.0)
        with pytest.raises(ValueError):
            decoherence_temperature(AREA, T0_QUOTED, 100e-9, 1.5)


class TestCoherenceCheck:
    def test_boundary_margin(self):
        separation = 100e-9
        check = coherence_ok(H / (2.0 * separation), separation)
        assert check.margin == pytest.approx(1.0, rel=1e-14)
        assert check.coherent

    def test_at_decoherence_temperature(self):
        # running the budget at T_dec must land on the margin-1 boundary
        separation = 0.5e-6
        t_dec = decoherence_temperature(AREA, T0_SWEEP, separation, DEFAULT_EMISSIVITY)
        budget = emitted_budget(
            ThermalSource(t_dec, AREA, DEFAULT_EMISSIVITY, T0_SWEEP)
        )
        check = coherence_ok(budget.momentum_spread, separation)
        assert check.margin == pytest.approx(1.0, rel=0.02)

    def test_zero_recoil_unbounded(self):
        check = coherence_ok(0.0, 100e-9)
        assert check.coherent
        assert check.unbounded
        assert math.isinf(check.margin)

    def test_hot_source_flagged(self):
        budget = emitted_budget(ThermalSource(5000.0, AREA, 1.0, T0_QUOTED))
        check = coherence_ok(budget.momentum_spread, 100e-9)
        assert not check.coherent


class TestSweep:
    def test_power_law_ratio(self):
        sweep = tdec_vs_separation_sweep(
            [100e-9, 1000e-9], AREA, T0_SWEEP, DEFAULT_EMISSIVITY
        )
        assert sweep.temperatures[1] / sweep.temperatures[0] == pytest.approx(
            10.0**-0.4, rel=1e-10
        )

    def test_published_rows(self):
        sweep = tdec_vs_separation_sweep(
            [100e-9, 0.5e-6], AREA, T0_SWEEP, DEFAULT_EMISSIVITY
        )
        assert sweep.temperatures[0] == pytest.approx(3700.0, rel=0.02)
        assert sweep.temperatures[1] == pytest.approx(2000.0, rel=0.05)
        assert list(sweep.above_fragmentation) == [1, 0]

    def test_monotone_decreasing(self):
        d = np.geomspace(50e-9, 5e-6, 100)
        sweep = tdec_vs_separation_sweep(d, AREA, T0_SWEEP, DEFAULT_EMISSIVITY)
        assert np.all(np.diff(sweep.temperatures) < 0.0)

    def test_csv_format(self):
        sweep = tdec_vs_separation_sweep(
            [100e-9, 0.5e-6], AREA, T0_SWEEP, DEFAULT_EMISSIVITY
        )
        lines = sweep.to_csv().strip().split("\n")
        assert lines[0] == "d_m,T_dec_K,above_fragmentation"
        assert lines[1].endswith(",1")
        assert lines[2].endswith(",0")

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            tdec_vs_separation_sweep([1e-6, 1e-7], AREA, T0_SWEEP)


class TestValidation:
    def test_thermal_source_bounds(self):
        with pytest.raises(ValueError):
            ThermalSource(-1.0, AREA)
        with pytest.raises(ValueError):
            ThermalSource(300.0, AREA, emissivity=2.0)
        with pytest.raises(ValueError):
            ThermalSource(300.0, AREA, flight_time=0.0)

    def test_budget_nonnegative(self):
        with pytest.raises(ValueError):
            RecoilBudget(-1.0, 1.0, 1.0)

    def test_fragmentation_threshold_value(self):
        assert FRAGMENTATION_TEMPERATURE == 3000.0
