"""Double-Gaussian slit state, screen intensities and fringe geometry.

The exact screen intensity is the x-marginal of the evolved two-packet
superposition; it is normalized to one by construction for any parameters.
The far-field form drops the half-separation against the evolved spread and
carries the cos(2 pi x / X) fringe with period X = h t0 / (m d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .foundation import CONSTANTS
from .serialize import render_csv, atomic_write_text
from .wavepacket import GaussianPacket1D, free_evolve, spatial_spread

__all__ = [
    "SlitGeometry",
    "BeamParams",
    "Experiment",
    "Pattern",
    "normalization_N",
    "exact_intensity",
    "fringe_period",
    "far_field_intensity",
    "recoiled_intensity",
]

_HBAR = CONSTANTS.hbar
_H = CONSTANTS.h


@dataclass(frozen=True)
class SlitGeometry:
    """Two slits of width ``slit_width`` separated by ``separation``, screen at ``screen_distance``."""

    slit_width: float        # a, m
    separation: float        # d, m
    screen_distance: float   # L, m

    def __post_init__(self) -> None:
        for name in ("slit_width", "separation", "screen_distance"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def with_default_ratio(cls, slit_width: float, screen_distance: float) -> "SlitGeometry":
        # separation d = 2a is the conventional default, not an enforced relation
        return cls(slit_width, 2.0 * slit_width, screen_distance)


@dataclass(frozen=True)
class BeamParams:
    """Longitudinal beam: mass, speed along z and transverse momentum spread."""

    mass: float          # kg
    speed: float         # v_z, m/s
    mom_spread: float    # delta p_x, kg m/s

    def __post_init__(self) -> None:
        for name in ("mass", "speed", "mom_spread"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def k0(self) -> float:
        """Longitudinal wavenumber m*v_z/hbar (1/m)."""
        return self.mass * self.speed / _HBAR

    @property
    def de_broglie_wavelength(self) -> float:
        return 2.0 * math.pi / self.k0

    def flight_time(self, screen_distance: float) -> float:
        return screen_distance / self.speed

    @classmethod
    def for_target_spread(
        cls, mass: float, speed: float, spread_at_screen: float, flight_time: float
    ) -> "BeamParams":
        """Choose the momentum spread that evolves (eta0 = 0) to the given
        position spread after ``flight_time``.

        Uses the far-field root of dx(t)^2 = hbar^2/(4 dp^2) + dp^2 t^2/m^2.
        """
        a = (flight_time / mass) ** 2
        disc = spread_at_screen**4 - a * _HBAR**2
        if disc < 0.0:
            raise ValueError(
                "target spread is below the minimum reachable at this flight time"
            )
        dp2 = (spread_at_screen**2 + math.sqrt(disc)) / (2.0 * a)
        return cls(mass, speed, math.sqrt(dp2))


@dataclass(frozen=True)
class Experiment:
    """Slit geometry plus beam, with the derived flight time and fringe period.

    ``flight_time_override`` pins t0 explicitly; otherwise t0 = L / v_z.
    """

    geometry: SlitGeometry
    beam: BeamParams
    flight_time_override: float | None = None

    @property
    def flight_time(self) -> float:
        if self.flight_time_override is not None:
            return self.flight_time_override
        return self.beam.flight_time(self.geometry.screen_distance)

    @property
    def fringe_period(self) -> float:
        return fringe_period(self.geometry, self.beam, t0=self.flight_time)

    def packet_at_screen(self, eta0: float = 0.0) -> GaussianPacket1D:
        packet = GaussianPacket1D(
            mean_pos=0.0,
            mean_mom=0.0,
            mom_spread=self.beam.mom_spread,
            eta=eta0,
            mass=self.beam.mass,
        )
        return free_evolve(packet, self.flight_time)

    def spread_at_screen(self, eta0: float = 0.0) -> float:
        return spatial_spread(self.packet_at_screen(eta0))


@dataclass(frozen=True)
class Pattern:
    """Screen intensity sampled on a strictly increasing grid."""

    x_grid: np.ndarray       # m
    intensity: np.ndarray    # 1/m
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        x = np.asarray(self.x_grid, dtype=np.float64)
        y = np.asarray(self.intensity, dtype=np.float64)
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "intensity", y)
        if x.ndim != 1 or x.size < 2 or y.shape != x.shape:
            raise ValueError("pattern needs matching 1-d grids with at least 2 points")
        if not np.all(np.diff(x) > 0.0):
            raise ValueError("x_grid must be strictly increasing")
        floor = -1e-12 * max(float(y.max(initial=0.0)), 1.0)
        if float(y.min()) < floor:
            raise ValueError("intensity has significantly negative entries")

    def to_csv(self) -> str:
        return render_csv(["x_m", "intensity_per_m"], [self.x_grid, self.intensity])

    def write_csv(self, path: str) -> None:
        atomic_write_text(path, self.to_csv())


def normalization_N(separation: float, mom_spread: float) -> float:
    """Norm of the symmetric two-packet superposition.

    2 (1 + exp(-d^2 dp^2 / 2 hbar^2)); tends to 4 for overlapping packets
    and to 2 once they are well separated.
    """
    if not (separation > 0.0 and mom_spread > 0.0):
        raise ValueError("separation and mom_spread must be positive")
    arg = (separation * mom_spread / _HBAR) ** 2 / 2.0
    return 2.0 * (1.0 + math.exp(-arg))


def fringe_period(geom: SlitGeometry, beam: BeamParams, t0: float | None = None) -> float:
    """Fringe period X = h t0 / (m d) = 2 pi L / (k0 d)."""
    if t0 is None:
        t0 = beam.flight_time(geom.screen_distance)
    return _H * t0 / (beam.mass * geom.separation)


def exact_intensity(
    geom: SlitGeometry,
    beam: BeamParams,
    eta0: float,
    x: float,
    t0: float | None = None,
) -> float:
    """Screen intensity of the evolved double Gaussian at position x.

    Keeps every envelope term and the exact cos frequency
    eta(t0) d / (2 dx(t0)^2); integrates to one for any parameters.
    """
    if t0 is None:
        t0 = beam.flight_time(geom.screen_distance)
    packet = free_evolve(
        GaussianPacket1D(0.0, 0.0, beam.mom_spread, eta=eta0, mass=beam.mass), t0
    )
    dx2 = spatial_spread(packet) ** 2
    d = geom.separation
    half = 0.5 * d
    norm = normalization_N(d, beam.mom_spread) * math.sqrt(2.0 * math.pi * dx2)
    bracket = (
        math.exp(-((x + half) ** 2) / (2.0 * dx2))
        + math.exp(-((x - half) ** 2) / (2.0 * dx2))
        + 2.0
        * math.exp(-(x * x + half * half) / (2.0 * dx2))
        * math.cos(packet.eta * d * x / (2.0 * dx2))
    )
    return bracket / norm


def far_field_intensity(x: float, period: float, spread: float) -> float:
    """Gaussian envelope times the two-slit fringe 1 + cos(2 pi x / X)."""
    if not (period > 0.0 and spread > 0.0):
        raise ValueError("period and spread must be positive")
    u = x / spread
    envelope = math.exp(-0.5 * u * u) / (spread * math.sqrt(2.0 * math.pi))
    return envelope * (1.0 + math.cos(2.0 * math.pi * x / period))


def recoiled_intensity(
    x: float, v_x: float, t0: float, period: float, spread: float
) -> float:
    """Far-field pattern rigidly translated by the recoil drift v_x t0."""
    return far_field_intensity(x - v_x * t0, period, spread)
