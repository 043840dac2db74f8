"""Blackbody emission during flight: fluxes, photon counts and recoil bounds.

The emitted photons leave in random directions, so the net momentum kick
grows only as the square root of the photon count.  Setting that random
walk equal to the half-fringe momentum h/2d gives the temperature above
which fringes wash out; the emissivity of a small curved emitter suppresses
the fluxes and raises the bound by alpha_em^(-1/5).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .foundation import CONSTANTS
from .serialize import render_csv, atomic_write_text

__all__ = [
    "ThermalSource",
    "RecoilBudget",
    "CoherenceCheck",
    "TdecSweep",
    "FRAGMENTATION_TEMPERATURE",
    "DEFAULT_EMISSIVITY",
    "blackbody_intensity",
    "blackbody_photon_flux",
    "emitted_budget",
    "kappa_constant",
    "xi_constant",
    "decoherence_temperature",
    "coherence_ok",
    "tdec_vs_separation_sweep",
]

_HBAR = CONSTANTS.hbar
_H = CONSTANTS.h
_C = CONSTANTS.c
_KB = CONSTANTS.kB
_ZETA3 = CONSTANTS.zeta3

# C60-like molecules start to fragment around here; bounds above it are flagged.
FRAGMENTATION_TEMPERATURE = 3000.0
# curvature-suppressed emissivity of a small carbon cluster
DEFAULT_EMISSIVITY = 4.5e-5


@dataclass(frozen=True)
class ThermalSource:
    temperature: float               # K
    area: float                      # m^2
    emissivity: float = DEFAULT_EMISSIVITY
    flight_time: float = 9.47e-3     # s

    def __post_init__(self) -> None:
        if not self.temperature > 0.0:
            raise ValueError("temperature must be positive")
        if not self.area > 0.0:
            raise ValueError("area must be positive")
        if not 0.0 < self.emissivity <= 1.0:
            raise ValueError("emissivity must lie in (0, 1]")
        if not self.flight_time > 0.0:
            raise ValueError("flight_time must be positive")


@dataclass(frozen=True)
class RecoilBudget:
    radiated_energy: float   # J
    photon_count: float      # expected number
    momentum_spread: float   # kg m/s

    def __post_init__(self) -> None:
        if min(self.radiated_energy, self.photon_count, self.momentum_spread) < 0.0:
            raise ValueError("budget entries must be non-negative")


@dataclass(frozen=True)
class CoherenceCheck:
    coherent: bool
    margin: float  # (h/2d) / delta_p; inf when no momentum was transferred

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.margin)


def blackbody_intensity(temperature: float) -> float:
    """Radiated power per unit surface, (pi^2/60) kB^4 T^4 / (c^2 hbar^3)."""
    if not temperature > 0.0:
        raise ValueError("temperature must be positive")
    return math.pi**2 / 60.0 * _KB**4 * temperature**4 / (_C**2 * _HBAR**3)


def blackbody_photon_flux(temperature: float) -> float:
    """Emitted photons per unit surface and time, (zeta(3)/2 pi^2) kB^3 T^3 / (c^2 hbar^3)."""
    if not temperature > 0.0:
        raise ValueError("temperature must be positive")
    return _ZETA3 / (2.0 * math.pi**2) * _KB**3 * temperature**3 / (_C**2 * _HBAR**3)


def kappa_constant() -> float:
    """Coefficient of the recoil law delta_p = kappa (A t0)^(1/2) T^(5/2)."""
    return (
        math.sqrt(2.0 / _ZETA3) * math.pi**3 / 60.0 * _KB**2.5 / (_C**2 * _HBAR**1.5)
    )


def xi_constant() -> float:
    """Coefficient of the bound T_dec' = xi / (A t0 d^2)^(1/5)."""
    return (1800.0 * _ZETA3 / math.pi**4) ** 0.2 * _HBAR * _C**0.8 / _KB


def emitted_budget(src: ThermalSource) -> RecoilBudget:
    """Energy, photon count and random-walk momentum spread over the flight.

    delta_p = sqrt(alpha_em) kappa (A t0)^(1/2) T^(5/2), identical to
    delta_E / (c sqrt(n)) for every emissivity.
    """
    exposure = src.area * src.flight_time
    energy = src.emissivity * blackbody_intensity(src.temperature) * exposure
    count = src.emissivity * blackbody_photon_flux(src.temperature) * exposure
    dp = (
        math.sqrt(src.emissivity)
        * kappa_constant()
        * math.sqrt(exposure)
        * src.temperature**2.5
    )
    return RecoilBudget(energy, count, dp)


def decoherence_temperature(
    area: float, flight_time: float, separation: float, emissivity: float = 1.0
) -> float:
    """Temperature at which the recoil random walk reaches h/2d.

    xi * alpha_em^(-1/5) / (A t0 d^2)^(1/5); emissivity one gives the bare
    blackbody bound.
    """
    if min(area, flight_time, separation) <= 0.0:
        raise ValueError("area, flight_time and separation must be positive")
    if not 0.0 < emissivity <= 1.0:
        raise ValueError("emissivity must lie in (0, 1]")
    return (
        xi_constant()
        * emissivity**-0.2
        / (area * flight_time * separation**2) ** 0.2
    )


def coherence_ok(momentum_spread: float, separation: float) -> CoherenceCheck:
    """Fringes survive while the recoil spread stays below h/(2d)."""
    if momentum_spread < 0.0 or separation <= 0.0:
        raise ValueError("need momentum_spread >= 0 and separation > 0")
    limit = _H / (2.0 * separation)
    if momentum_spread == 0.0:
        return CoherenceCheck(coherent=True, margin=math.inf)
    margin = limit / momentum_spread
    return CoherenceCheck(coherent=momentum_spread <= limit, margin=margin)


@dataclass(frozen=True)
class TdecSweep:
    separations: np.ndarray
    temperatures: np.ndarray
    above_fragmentation: np.ndarray

    def to_csv(self) -> str:
        return render_csv(
            ["d_m", "T_dec_K", "above_fragmentation"],
            [self.separations, self.temperatures, self.above_fragmentation],
        )

    def write_csv(self, path: str) -> None:
        atomic_write_text(path, self.to_csv())


def tdec_vs_separation_sweep(
    separations: Sequence[float],
    area: float,
    flight_time: float,
    emissivity: float = DEFAULT_EMISSIVITY,
) -> TdecSweep:
    """Decoherence temperature versus slit separation (falls as d^(-2/5))."""
    d = np.asarray(list(separations), dtype=np.float64)
    if d.size == 0:
        raise ValueError("separations must be non-empty")
    if not np.all(np.diff(d) > 0.0):
        raise ValueError("separations must be sorted increasing")
    temps = np.array(
        [decoherence_temperature(area, flight_time, float(di), emissivity) for di in d]
    )
    flags = (temps > FRAGMENTATION_TEMPERATURE).astype(np.int64)
    return TdecSweep(d, temps, flags)
