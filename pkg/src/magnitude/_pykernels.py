"""Numpy fallback for the compiled kernels in ``_ckernels``.

Same call signatures and semantics; used when the extension is not built
or when MAGNITUDE_BACKEND=python is set.
"""

import math

import numpy as np
from scipy.spatial.distance import cdist


def exp_kernel(points, scale):
    """Assemble Z[i, j] = exp(-scale * |p_i - p_j|).

    Returns ``(Z, min_offdiag_dist, i, j)`` locating the closest pair.
    The distance matrix is consumed in place, so peak memory is one n*n
    buffer plus cdist's output.
    """
    n = points.shape[0]
    if n == 1:
        return np.ones((1, 1)), math.inf, 0, 0
    D = cdist(points, points)
    np.fill_diagonal(D, np.inf)
    flat = int(np.argmin(D))
    i, j = divmod(flat, n)
    dmin = float(D[i, j])
    Z = np.exp(np.multiply(D, -scale, out=D), out=D)
    np.fill_diagonal(Z, 1.0)
    return Z, dmin, i, j


def residual_inf(z, w):
    """max_i |(Z w)_i - 1|"""
    r = z @ w
    r -= 1.0
    return float(np.abs(r, out=r).max())


def compensated_sum(x):
    return math.fsum(x)


def lattice_sum(dim, spacing, cutoff):
    """spacing^dim * sum of exp(-|x|) over lattice points with |x| <= cutoff.

    Only the nonnegative orthant is enumerated; a point with m nonzero
    coordinates carries weight 2^m for the sign patterns it represents.
    For dim 3 the work is sliced along the first axis to bound memory.
    """
    kmax = int(cutoff / spacing)
    r2max = (cutoff / spacing) ** 2
    idx = np.arange(kmax + 1)
    axis_weight = np.where(idx > 0, 2.0, 1.0)

    if dim == 1:
        total = float(np.sum(axis_weight * np.exp(-spacing * idx)))
        return total * spacing
    if dim == 2:
        jj, kk = np.meshgrid(idx, idx, indexing="ij")
        s2 = jj * jj + kk * kk
        mask = s2 <= r2max
        w2 = np.outer(axis_weight, axis_weight)
        total = float(np.sum(w2[mask] * np.exp(-spacing * np.sqrt(s2[mask]))))
        return total * spacing**2

    jj, kk = np.meshgrid(idx, idx, indexing="ij")
    s2_plane = jj * jj + kk * kk
    w_plane = np.outer(axis_weight, axis_weight)
    total = 0.0
    for i in idx:
        s2 = s2_plane + i * i
        mask = s2 <= r2max
        if not mask.any():
            break
        wi = 2.0 if i > 0 else 1.0
        total += wi * float(
            np.sum(w_plane[mask] * np.exp(-spacing * np.sqrt(s2[mask])))
        )
    return total * spacing**3
