"""Which-path criteria for a scattering probe, including the delayed-spot case.

A probe photon of wavelength lambda_L kicks the particle momentum by
h/lambda_L; if the spot sits a distance ell before the screen the kick
displaces the pattern by (h / lambda_L p) * ell, and fringes survive while
that displacement stays below the half fringe spacing h L / (2 p d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .doubleslit import SlitGeometry
from .foundation import CONSTANTS

__all__ = [
    "MicroscopeSetup",
    "CoherenceVerdict",
    "momentum_kick",
    "pattern_shake",
    "fringe_halfspacing",
    "coherence_condition",
]

_H = CONSTANTS.h


@dataclass(frozen=True)
class MicroscopeSetup:
    probe_wavelength: float        # lambda_L, m
    spot_distance_from_screen: float  # ell, m
    geometry: SlitGeometry
    particle_momentum: float       # p, kg m/s

    def __post_init__(self) -> None:
        if not self.probe_wavelength > 0.0:
            raise ValueError("probe_wavelength must be positive")
        if not self.particle_momentum > 0.0:
            raise ValueError("particle_momentum must be positive")
        if not 0.0 < self.spot_distance_from_screen <= self.geometry.screen_distance:
            raise ValueError("spot distance must satisfy 0 < ell <= L")


@dataclass(frozen=True)
class CoherenceVerdict:
    coherent: bool
    margin: float  # probe wavelength over the critical 2 d ell / L; >= 1 keeps fringes


def momentum_kick(probe_wavelength: float) -> float:
    """Momentum uncertainty h / lambda_L imparted by one scattered photon."""
    if not probe_wavelength > 0.0:
        raise ValueError("probe_wavelength must be positive")
    return _H / probe_wavelength


def pattern_shake(setup: MicroscopeSetup) -> float:
    """Screen displacement of the pattern caused by the probe kick.

    (h / lambda_L p) * ell; with the spot at the slits (ell = L) this is the
    full shake of the standard microscope.
    """
    return (
        momentum_kick(setup.probe_wavelength)
        / setup.particle_momentum
        * setup.spot_distance_from_screen
    )


def fringe_halfspacing(momentum: float, separation: float, screen_distance: float) -> float:
    """Distance between a minimum and the adjacent maximum, h L / (2 p d)."""
    if not (momentum > 0.0 and separation > 0.0 and screen_distance > 0.0):
        raise ValueError("inputs must be positive")
    return _H * screen_distance / (2.0 * momentum * separation)


def coherence_condition(setup: MicroscopeSetup) -> CoherenceVerdict:
    """Interference survives while lambda_L >= 2 d ell / L.

    The comparison in the underlying argument is order-of-magnitude; the
    continuous margin is returned so callers can pick their own threshold,
    and the boolean uses margin >= 1.
    """
    critical = (
        2.0
        * setup.geometry.separation
        * setup.spot_distance_from_screen
        / setup.geometry.screen_distance
    )
    margin = setup.probe_wavelength / critical
    return CoherenceVerdict(coherent=margin >= 1.0, margin=margin)
