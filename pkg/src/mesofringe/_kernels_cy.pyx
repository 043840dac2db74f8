# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Volterra trapezoid recurrence and the per-point
adaptive quadrature of the recoil-direction average.

Semantics match mesofringe._kernels_py.
"""

import numpy as np

from libc.math cimport cos, exp, fabs, sqrt

cdef double SQRT_2PI = sqrt(2.0 * 3.14159265358979323846)


def volterra_trapezoid(sigma, double dt):
    sigma = np.ascontiguousarray(sigma, dtype=np.complex128)
    cdef double complex[::1] sig = sigma
    cdef Py_ssize_t n = sig.shape[0] - 1
    alpha_arr = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] alpha = alpha_arr
    alpha[0] = 1.0
    if n == 0:
        return alpha_arr
    cdef double complex conv_prev = 0.0
    cdef double complex denom = 1.0 + 0.25 * dt * dt * sig[0]
    cdef double complex inner, tail
    cdef Py_ssize_t k, j
    for k in range(1, n + 1):
        inner = 0.0
        for j in range(1, k):
            inner = inner + sig[j] * alpha[k - j]
        tail = inner + 0.5 * sig[k] * alpha[0]
        alpha[k] = (alpha[k - 1] - 0.5 * dt * conv_prev - 0.5 * dt * dt * tail) / denom
        conv_prev = dt * (0.5 * sig[0] * alpha[k] + tail)
    return alpha_arr


# 15-point Kronrod nodes/weights with embedded 7-point Gauss rule
# (QUADPACK dqk15 values, same tables as mesofringe.foundation).
cdef double[8] XGK = [
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
]
cdef double[8] WGK = [
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
]
cdef double[4] WG = [
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
]

cdef struct Panel:
    double a
    double b
    double val
    double err


cdef inline double fringe_integrand(double xi, double z, double w, double r) nogil:
    cdef double s = z + w * xi
    return exp(-0.5 * s * s) / SQRT_2PI * (1.0 + cos(r * s))


cdef inline void gk15(double a, double b, double z, double w, double r,
                      double* val, double* err) nogil:
    cdef double center = 0.5 * (a + b)
    cdef double half = 0.5 * (b - a)
    cdef double fc = fringe_integrand(center, z, w, r)
    cdef double resk = WGK[7] * fc
    cdef double resg = WG[3] * fc
    cdef double dx, f1, f2
    cdef int j
    for j in range(7):
        dx = half * XGK[j]
        f1 = fringe_integrand(center - dx, z, w, r)
        f2 = fringe_integrand(center + dx, z, w, r)
        resk = resk + WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg = resg + WG[j / 2] * (f1 + f2)
    resk = resk * half
    resg = resg * half
    val[0] = resk
    cdef double e = fabs(resk - resg)
    if e > 0.0:
        e = min(e, 200.0 * e * sqrt(e / (fabs(resk) + 1e-300)))
    if e < fabs(resk) * 1e-16:
        e = fabs(resk) * 1e-16
    err[0] = e


cdef double adaptive_point(double z, double w, double r, double tol) nogil:
    # locally adaptive bisection with an explicit stack; panels whose error
    # fits their width share of the budget are accepted
    cdef Panel stack[64]
    cdef int top = 0
    cdef double total = 0.0
    cdef double a, b, mid, lv, le, rv, re
    cdef Panel p
    gk15(-1.0, 1.0, z, w, r, &lv, &le)
    stack[0].a = -1.0
    stack[0].b = 1.0
    stack[0].val = lv
    stack[0].err = le
    top = 1
    while top > 0:
        top = top - 1
        p = stack[top]
        if p.err <= tol * 0.5 * (p.b - p.a) or top >= 62:
            total = total + p.val
            continue
        mid = 0.5 * (p.a + p.b)
        gk15(p.a, mid, z, w, r, &lv, &le)
        gk15(mid, p.b, z, w, r, &rv, &re)
        stack[top].a = p.a
        stack[top].b = mid
        stack[top].val = lv
        stack[top].err = le
        stack[top + 1].a = mid
        stack[top + 1].b = p.b
        stack[top + 1].val = rv
        stack[top + 1].err = re
        top = top + 2
    return 0.5 * total


def angular_average_grid(z, double w, double r, double tol):
    z_arr = np.ascontiguousarray(z, dtype=np.float64)
    out_arr = np.empty_like(z_arr)
    cdef double[::1] zv = z_arr.ravel()
    cdef double[::1] ov = out_arr.ravel()
    cdef Py_ssize_t i, n = zv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = adaptive_point(zv[i], w, r, tol)
    return out_arr
