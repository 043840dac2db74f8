"""Spontaneous-emission machinery.

Golden-rule decay rate for a dipole transition, the exponential-decay
amplitude of the Markov limit, and the full memory-kernel dynamics

    a'(t) = -int_0^t sigma(tau) a(t-tau) dtau,    a(0) = 1,

where sigma is the Fourier transform of the reservoir form factor.  Flat
and Lorentzian form factors are supported; both admit closed-form kernels
and independent checks, and they bracket the physics of a broadband
reservoir.  Emitted-mode weights and the total emission probability
1 - exp(-gamma t) close the unitarity budget.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .foundation import CONSTANTS, integrate, principal_value_integrate, sinc
from .serialize import render_csv, atomic_write_text

__all__ = [
    "TwoLevelEmitter",
    "FormFactor",
    "DecayAmplitudeSeries",
    "ConvergenceError",
    "decay_rate",
    "dipole_for_rate",
    "lamb_shift",
    "markov_amplitude",
    "memory_kernel",
    "solve_nonmarkov",
    "beta_weight",
    "emission_probability",
    "emission_probability_quadrature",
]

_HBAR = CONSTANTS.hbar
_C = CONSTANTS.c
_ALPHA_FS = CONSTANTS.alpha_fs


class ConvergenceError(ArithmeticError):
    """Volterra step-halving check failed."""


@dataclass(frozen=True)
class TwoLevelEmitter:
    """Two-level transition with angular frequency omega0 and dipole length |<e|x|g>|."""

    omega0: float         # rad/s
    dipole_length: float  # m

    def __post_init__(self) -> None:
        if not self.omega0 > 0.0:
            raise ValueError("omega0 must be positive")
        if self.dipole_length < 0.0:
            raise ValueError("dipole_length must be non-negative")

    @property
    def emission_wavelength(self) -> float:
        return 2.0 * math.pi * _C / self.omega0

    @property
    def gamma(self) -> float:
        return decay_rate(self)


def decay_rate(emitter: TwoLevelEmitter) -> float:
    """Golden-rule dipole decay rate (4/3) alpha omega0^3 |d|^2 / c^2."""
    return (
        4.0 / 3.0 * _ALPHA_FS * emitter.omega0**3 * emitter.dipole_length**2 / _C**2
    )


def dipole_for_rate(omega0: float, gamma: float) -> float:
    """Dipole length that produces the decay rate ``gamma`` at ``omega0``."""
    if gamma < 0.0 or omega0 <= 0.0:
        raise ValueError("need gamma >= 0 and omega0 > 0")
    return math.sqrt(3.0 * gamma * _C**2 / (4.0 * _ALPHA_FS * omega0**3))


@dataclass(frozen=True)
class FormFactor:
    """Spectral coupling density Gamma(omega) of the reservoir.

    flat:        Gamma = peak on |omega - center| < bandwidth, else 0
    lorentzian:  Gamma = peak * bandwidth^2 / ((omega - center)^2 + bandwidth^2)
    """

    kind: str          # "flat" | "lorentzian"
    center: float      # rad/s
    bandwidth: float   # Lambda, rad/s
    peak: float        # Gamma(center), 1/s

    def __post_init__(self) -> None:
        if self.kind not in ("flat", "lorentzian"):
            raise ValueError(f"unknown form factor kind {self.kind!r}")
        if not self.bandwidth > 0.0:
            raise ValueError("bandwidth must be positive")
        if self.peak < 0.0:
            raise ValueError("peak must be non-negative")

    def __call__(self, omega: float) -> float:
        detune = omega - self.center
        if self.kind == "flat":
            return self.peak if abs(detune) < self.bandwidth else 0.0
        return self.peak * self.bandwidth**2 / (detune**2 + self.bandwidth**2)

    def support(self) -> tuple[float, float]:
        # Lorentzian tails are truncated at 50 bandwidths for quadrature
        halfwidth = self.bandwidth if self.kind == "flat" else 50.0 * self.bandwidth
        return (self.center - halfwidth, self.center + halfwidth)


@dataclass(frozen=True)
class DecayAmplitudeSeries:
    """Excited-state amplitude samples on a uniform time grid."""

    times: np.ndarray
    alpha: np.ndarray
    solver_tag: str  # "markov" | "volterra"
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=np.float64)
        a = np.asarray(self.alpha, dtype=np.complex128)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "alpha", a)
        if t.shape != a.shape or t.ndim != 1:
            raise ValueError("times and alpha must be matching 1-d arrays")
        if abs(abs(a[0]) - 1.0) > 1e-12:
            raise ValueError("|alpha(0)| must be 1")
        if float(np.abs(a).max()) > 1.0 + 1e-9:
            raise ValueError("|alpha| exceeded 1 beyond numerical tolerance")

    def to_csv(self) -> str:
        return render_csv(
            ["t_s", "re_alpha", "im_alpha", "abs_alpha"],
            [self.times, self.alpha.real, self.alpha.imag, np.abs(self.alpha)],
        )

    def write_csv(self, path: str) -> None:
        atomic_write_text(path, self.to_csv())


def lamb_shift(ff: FormFactor, omega0: float | None = None, tol: float = 1e-10) -> float:
    """Reservoir-induced level shift, PV int domega/2pi Gamma(omega)/(omega0 - omega).

    Vanishes for any form factor symmetric about ``omega0``.  The integral
    is evaluated on the form factor's (truncated) support in the detuning
    variable scaled by the bandwidth, with ``tol`` applied to the integral
    of the scaled integrand; the result has magnitude of order ``peak``.
    """
    if omega0 is None:
        omega0 = ff.center
    lo, hi = ff.support()
    if not (lo < omega0 < hi):
        raise ValueError("omega0 must lie inside the form factor support")
    if ff.peak == 0.0:
        return 0.0
    lam = ff.bandwidth

    # scale to u = (omega - omega0)/bandwidth and normalize by the peak rate
    # so the quadrature sees O(1) numbers; tol is relative to the peak
    def numerator(u: float) -> float:
        return -ff(omega0 + u * lam) / (2.0 * math.pi * ff.peak)

    return ff.peak * principal_value_integrate(
        numerator, 0.0, (lo - omega0) / lam, (hi - omega0) / lam, tol=tol
    )


def markov_amplitude(gamma: float, shift: float, t: float) -> complex:
    """Exponential-decay amplitude exp(-i shift t - gamma t / 2)."""
    if t < 0.0:
        raise ValueError("t must be non-negative")
    return cmath.exp(complex(-0.5 * gamma * t, -shift * t))


def memory_kernel(ff: FormFactor, t: float, omega0: float | None = None) -> complex:
    """Closed-form kernel sigma(t) = int domega/2pi Gamma(omega) e^{-i(omega-omega0)t}.

    flat:        (peak * bandwidth / pi) * sinc(bandwidth t)
    lorentzian:  (peak * bandwidth / 2) * exp(-bandwidth t)
    times a phase factor when the line center is detuned from omega0.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    if omega0 is None:
        omega0 = ff.center
    if ff.kind == "flat":
        base = ff.peak * ff.bandwidth / math.pi * sinc(ff.bandwidth * t)
    else:
        base = 0.5 * ff.peak * ff.bandwidth * math.exp(-ff.bandwidth * t)
    detune = ff.center - omega0
    if detune == 0.0:
        return complex(base, 0.0)
    return base * cmath.exp(complex(0.0, -detune * t))


def solve_nonmarkov(
    ff: FormFactor,
    t_max: float,
    n_steps: int,
    omega0: float | None = None,
    check_convergence: bool = True,
    convergence_tol: float | None = None,
) -> DecayAmplitudeSeries:
    """Solve the memory-kernel amplitude equation on [0, t_max].

    Fixed-step trapezoidal convolution scheme (second order, implicit in
    the newest point).  With ``check_convergence`` the solve is repeated at
    half resolution and two step-halving measures are recorded in ``meta``:
    the change in sup|alpha| (``sup_gap``, an instability guard) and the
    pointwise gap between the two resolutions (``halving_gap``).  By
    default the sup norm must move by less than 1e-6; passing
    ``convergence_tol`` instead gates on the pointwise gap.

    Raises
    ------
    ConvergenceError
        If the requested step-halving criterion fails.
    """
    if n_steps < 100:
        raise ValueError("n_steps must be at least 100")
    if not t_max > 0.0:
        raise ValueError("t_max must be positive")
    if check_convergence and n_steps % 2:
        raise ValueError("n_steps must be even when check_convergence is on")

    times = np.linspace(0.0, t_max, n_steps + 1)
    sigma = np.array([memory_kernel(ff, t, omega0) for t in times])
    alpha = kernels.volterra_trapezoid(sigma, t_max / n_steps)
    meta: dict = {"n_steps": n_steps, "backend": kernels.backend()}

    if check_convergence:
        half = n_steps // 2
        alpha_coarse = kernels.volterra_trapezoid(sigma[::2], t_max / half)
        sup_gap = abs(float(np.abs(alpha).max()) - float(np.abs(alpha_coarse).max()))
        point_gap = float(np.abs(alpha[::2] - alpha_coarse).max())
        meta["sup_gap"] = sup_gap
        meta["halving_gap"] = point_gap
        if convergence_tol is None:
            if sup_gap >= 1e-6:
                raise ConvergenceError(
                    f"step halving moved sup|alpha| by {sup_gap:g}; "
                    "the scheme is not resolving the kernel, increase n_steps"
                )
        elif point_gap >= convergence_tol:
            raise ConvergenceError(
                f"step-halving gap {point_gap:g} exceeds the requested "
                f"tolerance {convergence_tol:g}; increase n_steps"
            )

    return DecayAmplitudeSeries(times, alpha, solver_tag="volterra", meta=meta)


def beta_weight(
    omega_i: float, t: float, gamma: float, coupling_sq: float, omega0: float
) -> float:
    """Squared emitted-mode amplitude |beta_i(t)|^2 in the Markov limit.

    coupling_sq is |Phi_i|^2/hbar^2 (rad^2/s^2); the weight rises from zero
    to the Lorentzian line shape coupling_sq / ((omega_i-omega0)^2 + gamma^2/4).
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    detune = omega_i - omega0
    osc = 1.0 - cmath.exp(complex(-0.5 * gamma * t, detune * t))
    return coupling_sq * abs(osc) ** 2 / (detune**2 + 0.25 * gamma**2)


def emission_probability(gamma: float, t: float) -> float:
    """Total probability that the photon has been emitted: 1 - exp(-gamma t)."""
    if t < 0.0:
        raise ValueError("t must be non-negative")
    return -math.expm1(-gamma * t)


def emission_probability_quadrature(
    gamma: float,
    t: float,
    bandwidth_over_gamma: float = 200.0,
    kind: str = "flat",
    tol: float = 1e-9,
) -> float:
    """Independent check of the emission probability by mode-sum quadrature.

    Integrates the golden-rule-consistent density of emitted-mode weights,
    int domega Gamma(omega)/(2 pi) |1 - e^{i(omega-omega0)t - gamma t/2}|^2
    / ((omega-omega0)^2 + gamma^2/4), over the reservoir band.  Approaches
    1 - exp(-gamma t) as the bandwidth grows.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    if gamma == 0.0:
        return 0.0
    b = bandwidth_over_gamma
    s = gamma * t

    def weight(u: float) -> float:
        # u = (omega - omega0)/gamma
        if kind == "flat":
            shape = 1.0
        else:
            shape = b * b / (u * u + b * b)
        line = (1.0 + math.exp(-s) - 2.0 * math.exp(-0.5 * s) * math.cos(u * s)) / (
            u * u + 0.25
        )
        return shape * line / (2.0 * math.pi)

    lo, hi = (-b, b) if kind == "flat" else (-50.0 * b, 50.0 * b)
    return integrate(weight, lo, hi, tol=tol, max_subdivisions=20000)
