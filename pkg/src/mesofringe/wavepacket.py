"""One transverse Gaussian wavepacket mode under free evolution.

The state stores the momentum spread (conserved by free flight) and the
chirp parameter; the position spread is derived, which keeps conservation
laws exact instead of numerically approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .foundation import CONSTANTS

__all__ = ["GaussianPacket1D", "free_evolve", "position_density", "spatial_spread"]

_HBAR = CONSTANTS.hbar


@dataclass(frozen=True)
class GaussianPacket1D:
    """Gaussian mode exp(-(1-i*eta)/(4 dx^2) (x-mean_pos)^2 + i mean_mom x/hbar - i phase).

    ``mom_spread`` is the momentum standard deviation, constant under free
    evolution.  The derived position spread ``(hbar/2 mom_spread) *
    sqrt(1+eta^2)`` saturates the uncertainty bound exactly when eta = 0.
    """

    mean_pos: float          # m
    mean_mom: float          # kg m/s
    mom_spread: float        # kg m/s
    eta: float = 0.0         # chirp, dimensionless
    phase: float = 0.0       # rad
    mass: float = 1.0        # kg

    def __post_init__(self) -> None:
        if not self.mom_spread > 0.0:
            raise ValueError(f"mom_spread must be positive, got {self.mom_spread!r}")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")


def spatial_spread(packet: GaussianPacket1D) -> float:
    """Position standard deviation (hbar / 2 mom_spread) * sqrt(1 + eta^2)."""
    return _HBAR / (2.0 * packet.mom_spread) * math.hypot(1.0, packet.eta)


def free_evolve(packet: GaussianPacket1D, t: float) -> GaussianPacket1D:
    """Propagate the packet freely for a time t >= 0.

    Mean position drifts with the group velocity, the chirp grows linearly,
    momentum mean and spread are untouched, and the global phase picks up
    the kinetic term plus half the Gouy-like arctan difference.
    """
    if t < 0.0:
        raise ValueError(f"free_evolve requires t >= 0, got {t!r}")
    if t == 0.0:
        return packet
    eta_t = packet.eta + 2.0 * packet.mom_spread**2 * t / (packet.mass * _HBAR)
    phase_t = (
        packet.phase
        + packet.mean_mom**2 * t / (2.0 * packet.mass * _HBAR)
        + 0.5 * (math.atan(eta_t) - math.atan(packet.eta))
    )
    return replace(
        packet,
        mean_pos=packet.mean_pos + packet.mean_mom * t / packet.mass,
        eta=eta_t,
        phase=phase_t,
    )


def position_density(packet: GaussianPacket1D, x: float) -> float:
    """Position probability density (1/m); integrates to one."""
    dx = spatial_spread(packet)
    u = (x - packet.mean_pos) / dx
    return math.exp(-0.5 * u * u) / (dx * math.sqrt(2.0 * math.pi))
