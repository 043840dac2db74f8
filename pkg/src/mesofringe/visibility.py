"""Decohered interference patterns and fringe visibility.

A single photon emitted in a random direction shifts the arrival pattern by
the recoil drift; averaging the shifted fringe over the emission direction
multiplies the oscillatory term by sinc(2 pi d / lambda_em).  The screen
intensity splits into a surviving coherent branch weighted exp(-gamma t0)
and a recoil-averaged branch weighted 1 - exp(-gamma t0), giving the signed
closed-form visibility

    V = exp(-gamma t0) + (1 - exp(-gamma t0)) sinc(2 pi d / lambda_em).

Both the full quadrature of the direction average (envelope kept inside the
integral) and the factored flat-envelope form are exposed so their
agreement can be measured.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .doubleslit import Experiment, Pattern, far_field_intensity
from .emission import TwoLevelEmitter, dipole_for_rate
from .foundation import CONSTANTS, integrate, sinc
from .serialize import render_csv, atomic_write_text

__all__ = [
    "DecoherenceScenario",
    "ResolutionError",
    "VisibilitySurface",
    "exact_angular_average",
    "decohered_intensity_exact",
    "decohered_intensity_approx",
    "decohered_pattern",
    "visibility_closed",
    "extract_visibility",
    "visibility_surface",
    "default_grid",
    "thread_count",
]

_HBAR = CONSTANTS.hbar
_C = CONSTANTS.c

ANGULAR_AVERAGE_TOL = 1e-10


class ResolutionError(ValueError):
    """Pattern grid too coarse or too narrow for visibility extraction."""


@dataclass(frozen=True)
class DecoherenceScenario:
    """Experiment plus emission parameters driving the decohered pattern.

    ``gamma_t0`` is the decay rate times the flight time; the emitter
    supplies the emission wavelength and the recoil speed
    hbar omega0 / (m c).  The presentation ratio X/dx(t0) follows from the
    experiment and is exposed as a property rather than stored, so there is
    a single source of truth.
    """

    experiment: Experiment
    emitter: TwoLevelEmitter
    gamma_t0: float

    def __post_init__(self) -> None:
        if self.gamma_t0 < 0.0:
            raise ValueError("gamma_t0 must be non-negative")

    @property
    def d_over_lambda(self) -> float:
        return self.experiment.geometry.separation / self.emitter.emission_wavelength

    @property
    def recoil_speed(self) -> float:
        return _HBAR * self.emitter.omega0 / (self.experiment.beam.mass * _C)

    @property
    def recoil_drift(self) -> float:
        # equals fringe_period * d_over_lambda exactly
        return self.recoil_speed * self.experiment.flight_time

    @property
    def x_over_dx(self) -> float:
        return self.experiment.fringe_period / self.experiment.spread_at_screen()

    @classmethod
    def from_presentation(
        cls,
        experiment: Experiment,
        gamma_t0: float,
        d_over_lambda: float,
    ) -> "DecoherenceScenario":
        """Build a scenario from the dimensionless presentation parameters.

        The emitter is constructed so its emission wavelength gives the
        requested d/lambda_em and its dipole reproduces gamma = gamma_t0/t0.
        """
        if d_over_lambda <= 0.0:
            raise ValueError("d_over_lambda must be positive")
        lambda_em = experiment.geometry.separation / d_over_lambda
        omega0 = 2.0 * math.pi * _C / lambda_em
        gamma = gamma_t0 / experiment.flight_time
        emitter = TwoLevelEmitter(omega0, dipole_for_rate(omega0, gamma))
        return cls(experiment, emitter, gamma_t0)

    def describe(self) -> dict:
        exp = self.experiment
        return {
            "separation_m": exp.geometry.separation,
            "screen_distance_m": exp.geometry.screen_distance,
            "mass_kg": exp.beam.mass,
            "flight_time_s": exp.flight_time,
            "fringe_period_m": exp.fringe_period,
            "spread_at_screen_m": exp.spread_at_screen(),
            "gamma_t0": self.gamma_t0,
            "d_over_lambda_em": self.d_over_lambda,
            "x_over_dx": self.x_over_dx,
            "emission_wavelength_m": self.emitter.emission_wavelength,
        }


def visibility_closed(gamma_t0: float, d_over_lambda: float) -> float:
    """Signed fringe visibility; |V| is the measured contrast.

    Convex combination of full coherence (weight exp(-gamma_t0)) and the
    direction-averaged sinc factor; negative values mean inverted fringes.
    """
    if gamma_t0 < 0.0:
        raise ValueError("gamma_t0 must be non-negative")
    w = math.exp(-gamma_t0)
    return w + (1.0 - w) * sinc(2.0 * math.pi * d_over_lambda)


def exact_angular_average(x: float, scenario: DecoherenceScenario) -> float:
    """Direction-averaged recoiled pattern with the envelope kept inside.

    (1/2) int_{-1}^{1} I(x + vbar t0 xi) dxi with I the far-field fringe
    pattern; evaluated by adaptive quadrature of the spread-scaled
    integrand to ANGULAR_AVERAGE_TOL.
    """
    exp = scenario.experiment
    spread = exp.spread_at_screen()
    period = exp.fringe_period
    drift = scenario.recoil_drift

    def integrand(xi: float) -> float:
        return spread * far_field_intensity(x + drift * xi, period, spread)

    return 0.5 * integrate(integrand, -1.0, 1.0, tol=ANGULAR_AVERAGE_TOL) / spread


def decohered_intensity_exact(x: float, scenario: DecoherenceScenario) -> float:
    """Coherent branch plus direction-averaged branch, full quadrature."""
    exp = scenario.experiment
    w = math.exp(-scenario.gamma_t0)
    coherent = far_field_intensity(x, exp.fringe_period, exp.spread_at_screen())
    if w == 1.0:
        return coherent
    return w * coherent + (1.0 - w) * exact_angular_average(x, scenario)


def decohered_intensity_approx(x: float, scenario: DecoherenceScenario) -> float:
    """Flat-envelope factored form: envelope * (1 + V cos(2 pi x / X))."""
    exp = scenario.experiment
    spread = exp.spread_at_screen()
    v = visibility_closed(scenario.gamma_t0, scenario.d_over_lambda)
    u = x / spread
    envelope = math.exp(-0.5 * u * u) / (spread * math.sqrt(2.0 * math.pi))
    return envelope * (1.0 + v * math.cos(2.0 * math.pi * x / exp.fringe_period))


def thread_count() -> int:
    """Worker count for grid evaluation; MESOFRINGE_THREADS caps it."""
    raw = os.environ.get("MESOFRINGE_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"MESOFRINGE_THREADS must be an integer, got {raw!r}")
    return 1


def default_grid(scenario_spread: float, n_points: int = 2001) -> np.ndarray:
    """Default screen grid: +-3 spreads, covering >99% of the probability."""
    if n_points < 2:
        raise ValueError("need at least 2 grid points")
    return np.linspace(-3.0 * scenario_spread, 3.0 * scenario_spread, n_points)


def _angular_average_on_grid(scenario: DecoherenceScenario, x: np.ndarray) -> np.ndarray:
    exp = scenario.experiment
    spread = exp.spread_at_screen()
    z = x / spread
    w = scenario.recoil_drift / spread
    r = 2.0 * math.pi * spread / exp.fringe_period
    workers = thread_count()
    if workers == 1 or z.size < 64:
        avg = kernels.angular_average_grid(z, w, r, ANGULAR_AVERAGE_TOL)
    else:
        chunks = np.array_split(z, workers * 4)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    lambda c: kernels.angular_average_grid(c, w, r, ANGULAR_AVERAGE_TOL),
                    chunks,
                )
            )
        avg = np.concatenate(parts)
    return avg / spread


def decohered_pattern(
    scenario: DecoherenceScenario,
    x: np.ndarray | None = None,
    path: str = "exact",
    n_points: int = 2001,
) -> Pattern:
    """Evaluate the decohered pattern on a grid.

    ``path`` selects the full quadrature ('exact') or the factored
    flat-envelope form ('approx').  Grid points are independent, so the
    exact path is evaluated chunk-parallel; the result does not depend on
    the evaluation order.
    """
    exp = scenario.experiment
    spread = exp.spread_at_screen()
    period = exp.fringe_period
    if x is None:
        x = default_grid(spread, n_points)
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty grid")

    u = x / spread
    envelope = np.exp(-0.5 * u * u) / (spread * math.sqrt(2.0 * math.pi))
    phase = np.cos(2.0 * math.pi * x / period)
    if path == "approx":
        v = visibility_closed(scenario.gamma_t0, scenario.d_over_lambda)
        intensity = envelope * (1.0 + v * phase)
    elif path == "exact":
        w = math.exp(-scenario.gamma_t0)
        coherent = envelope * (1.0 + phase)
        if w == 1.0:
            intensity = coherent
        else:
            intensity = w * coherent + (1.0 - w) * _angular_average_on_grid(scenario, x)
    else:
        raise ValueError(f"unknown path {path!r}")

    meta = dict(scenario.describe())
    meta["path"] = path
    return Pattern(x, intensity, meta)


def extract_visibility(pattern: Pattern, period: float) -> float:
    """Fringe contrast (max - min)/(max + min) over the central period.

    Restricting the window to |x| <= period/2 bounds the envelope bias;
    the grid must span [-period, period] with at least 20 points per period.
    """
    x = pattern.x_grid
    if x[0] > -period or x[-1] < period:
        raise ResolutionError("pattern grid must span at least [-X, X]")
    spacing = float(np.diff(x).max())
    if spacing > period / 20.0:
        raise ResolutionError(
            f"grid spacing {spacing:g} too coarse for period {period:g} "
            "(need >= 20 points per period)"
        )
    window = np.abs(x) <= 0.5 * period
    values = pattern.intensity[window]
    peak = float(values.max())
    trough = float(values.min())
    return (peak - trough) / (peak + trough)


@dataclass(frozen=True)
class VisibilitySurface:
    """Row-major table of the closed-form visibility on a parameter grid."""

    gamma_t0: np.ndarray
    d_over_lambda: np.ndarray
    values: np.ndarray  # shape (len(gamma_t0), len(d_over_lambda))

    def rows(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        g = np.repeat(self.gamma_t0, self.d_over_lambda.size)
        d = np.tile(self.d_over_lambda, self.gamma_t0.size)
        return g, d, self.values.ravel()

    def to_csv(self) -> str:
        g, d, v = self.rows()
        return render_csv(["gamma_t0", "d_over_lambda", "visibility"], [g, d, v])

    def write_csv(self, path: str) -> None:
        atomic_write_text(path, self.to_csv())


def visibility_surface(
    gamma_t0_grid: Sequence[float], d_over_lambda_grid: Sequence[float]
) -> VisibilitySurface:
    """Tabulate the signed closed-form visibility on a Cartesian grid."""
    g = np.asarray(list(gamma_t0_grid), dtype=np.float64)
    d = np.asarray(list(d_over_lambda_grid), dtype=np.float64)
    if g.size == 0 or d.size == 0:
        raise ValueError("grids must be non-empty")
    values = np.empty((g.size, d.size))
    for i, gt in enumerate(g):
        for j, dl in enumerate(d):
            values[i, j] = visibility_closed(float(gt), float(dl))
    return VisibilitySurface(g, d, values)
