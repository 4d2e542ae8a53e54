# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: kernel assembly, residuals, compensated sums,
and cubic-lattice Riemann sums.

Mirrors the numpy implementations in ``_pykernels``; the two modules
expose identical signatures and ``backend`` picks one at import time.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp, fabs, sqrt

cnp.import_array()


def exp_kernel(const double[:, ::1] points, double scale):
    """Assemble Z[i, j] = exp(-scale * |p_i - p_j|).

    Returns ``(Z, min_offdiag_dist, i, j)`` where the last three locate the
    closest pair, so callers can detect duplicates without a second pass.
    """
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t dim = points.shape[1]
    Z = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] z = Z
    cdef Py_ssize_t i, j, k
    cdef double acc, diff, dist, val
    cdef double dmin = INFINITY
    cdef Py_ssize_t imin = 0, jmin = 0

    for i in range(n):
        z[i, i] = 1.0
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(dim):
                diff = points[i, k] - points[j, k]
                acc += diff * diff
            dist = sqrt(acc)
            if dist < dmin:
                dmin = dist
                imin = i
                jmin = j
            val = exp(-scale * dist)
            z[i, j] = val
            z[j, i] = val
    return Z, dmin, imin, jmin


def residual_inf(const double[:, ::1] z, const double[::1] w):
    """max_i |(Z w)_i - 1|"""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t i, j
    cdef double s, worst = 0.0
    for i in range(n):
        s = -1.0
        for j in range(n):
            s += z[i, j] * w[j]
        if fabs(s) > worst:
            worst = fabs(s)
    return worst


def compensated_sum(const double[::1] x):
    """Neumaier-compensated sum; order-independent to ~1 ulp."""
    cdef Py_ssize_t i
    cdef double s = 0.0, c = 0.0, t
    for i in range(x.shape[0]):
        t = s + x[i]
        if fabs(s) >= fabs(x[i]):
            c += (s - t) + x[i]
        else:
            c += (x[i] - t) + s
        s = t
    return s + c

def lattice_sum(int dim, double spacing, double cutoff):
    """spacing^dim * sum of exp(-|x|) over lattice points with |x| <= cutoff.

    Exploits sign symmetry: each point with m nonzero coordinates stands in
    for 2^m sign patterns, so only the nonnegative orthant is visited.
    """
    cdef long kmax = <long>(cutoff / spacing)
    cdef double r2max = (cutoff / spacing) * (cutoff / spacing)
    cdef long i, j, k, s2
    cdef double total = 0.0, r, weight

    if dim == 1:
        total = 1.0
        for i in range(1, kmax + 1):
            total += 2.0 * exp(-spacing * i)
        return total * spacing
    if dim == 2:
        for i in range(kmax + 1):
            for j in range(kmax + 1):
                s2 = i * i + j * j
                if s2 > r2max:
                    break
                weight = 1.0
                if i > 0:
                    weight *= 2.0
                if j > 0:
                    weight *= 2.0
                total += weight * exp(-spacing * sqrt(<double>s2))
        return total * spacing * spacing
    for i in range(kmax + 1):
        if i * i > r2max:
            break
        for j in range(kmax + 1):
            if i * i + j * j > r2max:
                break
            for k in range(kmax + 1):
                s2 = i * i + j * j + k * k
                if s2 > r2max:
                    break
                weight = 1.0
                if i > 0:
                    weight *= 2.0
                if j > 0:
                    weight *= 2.0
                if k > 0:
                    weight *= 2.0
                total += weight * exp(-spacing * sqrt(<double>s2))
    return total * spacing * spacing * spacing
