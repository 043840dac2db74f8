"""Pure NumPy implementations of the hot kernels.

Reference semantics for mesofringe._kernels_cy; selected automatically when
the compiled extension is unavailable (see mesofringe.kernels).
"""

from __future__ import annotations

import math

import numpy as np

from .foundation import integrate

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def volterra_trapezoid(sigma: np.ndarray, dt: float) -> np.ndarray:
    """Solve a'(t) = -int_0^t k(tau) a(t-tau) dtau, a(0) = 1, on a uniform grid.

    ``sigma`` holds the kernel samples k(j*dt), j = 0..n.  Both the
    convolution quadrature and the time stepping use the trapezoid rule; the
    implicit new-point term is solved for in closed form, so the scheme is
    second order and unconditionally stable.
    """
    sigma = np.ascontiguousarray(sigma, dtype=np.complex128)
    n = sigma.size - 1
    alpha = np.empty(n + 1, dtype=np.complex128)
    alpha[0] = 1.0
    if n == 0:
        return alpha
    conv_prev = 0.0 + 0.0j
    denom = 1.0 + 0.25 * dt * dt * sigma[0]
    for k in range(1, n + 1):
        # sum_{j=1}^{k-1} sigma_j * alpha_{k-j}
        inner = np.dot(sigma[1:k], alpha[k - 1:0:-1]) if k > 1 else 0.0
        tail = inner + 0.5 * sigma[k] * alpha[0]
        alpha[k] = (alpha[k - 1] - 0.5 * dt * conv_prev - 0.5 * dt * dt * tail) / denom
        conv_prev = dt * (0.5 * sigma[0] * alpha[k] + tail)
    return alpha


def angular_average_grid(
    z: np.ndarray, w: float, r: float, tol: float
) -> np.ndarray:
    """Recoil-direction average of the fringe pattern on a scaled grid.

    For each scaled screen position z = x/spread, computes

        0.5 * int_{-1}^{1} phi(z + w*xi) * (1 + cos(r*(z + w*xi))) dxi

    with phi the unit normal density, w the recoil drift in spread units and
    r the fringe wavenumber in spread units.  ``tol`` is the absolute
    tolerance on each (dimensionless) point value.
    """
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    for i, zi in enumerate(z.ravel()):
        def f(xi: float, _z: float = zi) -> float:
            s = _z + w * xi
            return math.exp(-0.5 * s * s) / _SQRT_2PI * (1.0 + math.cos(r * s))

        out.ravel()[i] = 0.5 * integrate(f, -1.0, 1.0, tol=tol)
    return out
