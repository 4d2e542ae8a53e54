"""Kernel assembly and weighting solves.

The magnitude of a finite metric space (X, d) at scale t is sum(w) where w
solves Z w = 1 with Z[i, j] = exp(-t * d(x_i, x_j)).  For points in
Euclidean space Z is symmetric positive definite whenever the points are
distinct, so the solver factors with Cholesky and only falls back to a
pivoted LU if the factorization itself fails.  Every returned weighting is
gated on the recomputed residual ||Z w - 1||_inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import backend
from .errors import (
    DuplicatePointsError,
    IllConditionedError,
    NotHomogeneousError,
)

#: Hard ceiling on ||Z w - 1||_inf for any weighting this module returns.
RESIDUAL_GATE = 1e-6

#: Refinement steps: always at least one, stop early once converged.
MAX_REFINEMENTS = 3

#: Relative agreement required of kernel row sums before the homogeneous
#: (one-row) magnitude shortcut is trusted.
HOMOGENEITY_TOL = 1e-10

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite set of points in R^dim, optionally tagged with lattice data.

    ``cell_volume`` is the Voronoi cell volume of each point within the
    approximated body (a scalar when all cells agree, else one value per
    point) and ``lattice_dim`` the dimension those volumes live in; both
    are required for bulk-normalizing weights and absent for clouds that
    do not come from a lattice.
    """

    points: np.ndarray
    cell_volume: float | np.ndarray | None = None
    lattice_dim: int | None = None
    provenance: "ShapeSpec | str" = "custom"

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2:
            raise ValueError(f"points must be (n, dim), got shape {pts.shape}")
        n, dim = pts.shape
        if n < 1 or dim < 1:
            raise ValueError(f"need at least one point in R^(dim>=1), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

        cv = self.cell_volume
        if (cv is None) != (self.lattice_dim is None):
            raise ValueError("cell_volume and lattice_dim must be given together")
        if cv is not None:
            if not 1 <= int(self.lattice_dim) <= 3:
                raise ValueError(f"lattice_dim must be 1..3, got {self.lattice_dim}")
            if np.ndim(cv) == 0:
                cv = float(cv)
                if not (cv > 0 and math.isfinite(cv)):
                    raise ValueError("cell_volume must be positive and finite")
            else:
                cv = np.ascontiguousarray(np.asarray(cv, dtype=np.float64))
                if cv.shape != (n,):
                    raise ValueError(
                        f"per-point cell_volume must have shape ({n},), got {cv.shape}"
                    )
                if not np.all((cv > 0) & np.isfinite(cv)):
                    raise ValueError("cell volumes must be positive and finite")
                cv.setflags(write=False)
            object.__setattr__(self, "cell_volume", cv)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def min_spacing(self) -> float:
        """Smallest pairwise distance (inf for a single point).  Cached."""
        cached = getattr(self, "_min_spacing", None)
        if cached is None:
            if self.n_points < 2:
                cached = math.inf
            else:
                from scipy.spatial import cKDTree

                dist, _ = cKDTree(self.points).query(self.points, k=2)
                cached = float(dist[:, 1].min())
            object.__setattr__(self, "_min_spacing", cached)
        return cached


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Similarity matrix exp(-scale * d_ij): symmetric, unit diagonal,
    entries in (0, 1]."""

    entries: np.ndarray
    scale: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class Weighting:
    """Solution of Z w = 1 together with its solve diagnostics.

    ``scale`` records the distance scaling the kernel was built with, so
    downstream normalizations know the size of the body the weights
    belong to without re-threading it through every call.
    """

    weights: np.ndarray
    residual_inf: float
    solver_tag: str
    scale: float = 1.0

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def build_kernel(cloud: PointCloud, scale: float) -> KernelMatrix:
    """Assemble the similarity matrix for ``cloud`` with distances scaled
    by ``scale``.

    Raises DuplicatePointsError (naming the colliding indices) when two
    points coincide, since the matrix is then singular by construction.
    """
    scale = float(scale)
    if not (scale > 0 and math.isfinite(scale)):
        raise ValueError(f"scale must be positive and finite, got {scale}")
    Z, dmin, i, j = backend.exp_kernel(cloud.points, scale)
    if cloud.n_points > 1 and dmin == 0.0:
        raise DuplicatePointsError(i, j)
    return KernelMatrix(entries=Z, scale=scale)


def solve_weighting(
    kernel: KernelMatrix,
    *,
    residual_gate: float = RESIDUAL_GATE,
    max_refinements: int = MAX_REFINEMENTS,
) -> Weighting:
    """Solve Z w = 1 by Cholesky with iterative refinement.

    At least one refinement step always runs; further steps (up to
    ``max_refinements``) run while the residual keeps halving.  A pivoted
    LU is used only if the Cholesky factorization fails outright, and the
    path taken is recorded in ``solver_tag``.  The reported residual is
    recomputed from the returned weights; if it exceeds ``residual_gate``
    the solve raises IllConditionedError rather than return bad weights.
    """
    if max_refinements < 1:
        raise ValueError("max_refinements must be >= 1")
    Z = kernel.entries
    ones = np.ones(kernel.n)
    try:
        factor = sla.cho_factor(Z, check_finite=False)
        tag = "cholesky"

        def apply(b):
            return sla.cho_solve(factor, b, check_finite=False)

    except np.linalg.LinAlgError:
        factor = sla.lu_factor(Z, check_finite=False)
        tag = "lu"

        def apply(b):
            return sla.lu_solve(factor, b, check_finite=False)

    w = apply(ones)
    best_w = w
    best_res = backend.residual_inf(Z, w)
    for _ in range(max_refinements):
        correction = apply(ones - Z @ w)
        w = w + correction
        res = backend.residual_inf(Z, w)
        still_improving = res < 0.5 * best_res
        if res < best_res:
            best_w, best_res = w, res
        if best_res <= 64.0 * _EPS or not still_improving:
            break

    if not (best_res <= residual_gate):
        raise IllConditionedError(best_res, residual_gate, tag)
    best_w = np.ascontiguousarray(best_w)
    best_w.setflags(write=False)
    return Weighting(
        weights=best_w,
        residual_inf=float(best_res),
        solver_tag=tag,
        scale=kernel.scale,
    )


def magnitude(weighting: Weighting) -> float:
    """Sum of the weights, accumulated with compensated summation so the
    result is independent of point ordering to ~1 ulp."""
    return float(backend.compensated_sum(weighting.weights))


def residual(kernel: KernelMatrix, weighting: Weighting) -> float:
    """||Z w - 1||_inf recomputed from scratch."""
    if kernel.n != weighting.n:
        raise ValueError(
            f"kernel is {kernel.n}x{kernel.n} but weighting has {weighting.n} entries"
        )
    return float(backend.residual_inf(kernel.entries, weighting.weights))


def speyer_magnitude(
    cloud: PointCloud, scale: float, *, rel_tol: float = HOMOGENEITY_TOL
) -> float:
    """Magnitude of a homogeneous cloud via the one-row shortcut
    n / sum_x exp(-scale * d(x0, x)).

    Valid only when every point sees the same multiset of distances; this
    is checked by requiring all kernel row sums to agree within ``rel_tol``
    relative, and NotHomogeneousError is raised otherwise.
    """
    kernel = build_kernel(cloud, scale)
    row_sums = kernel.entries.sum(axis=1)
    ref = float(row_sums[0])
    deviation = float(np.abs(row_sums - ref).max() / ref)
    if deviation > rel_tol:
        raise NotHomogeneousError(deviation, rel_tol)
    return cloud.n_points / ref
