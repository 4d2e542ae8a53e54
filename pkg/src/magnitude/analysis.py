"""Scale sweeps, bulk/edge diagnostics, the lattice-sum identity, and
growth-rate fits.

Sweep records are independent solves ordered by scale; all operations
here are pure, so results are reproducible run to run.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import backend, core
from .core import PointCloud, Weighting
from .errors import (
    MagnitudeError,
    MissingCellDataError,
    SweepError,
    UnsupportedShapeError,
)
from .shapes import ShapeSpec, generate
from .valuation import omega, penguin, supports_valuation

#: Scaled nearest-neighbor spacing beyond which a grid reads as coarse
#: (points should sit within ~0.1 units of their neighbors).
FINENESS_SPACING = 0.1

#: Scaled spacing beyond which a record counts as saturated; such records
#: are excluded from fit windows unless explicitly included.
SATURATION_SPACING = 1.0

#: Growth exponent of the gasket fit, fixed at log2(3).
GASKET_EXPONENT = math.log(3.0) / math.log(2.0)


class FinenessWarning(UserWarning):
    """Some sweep scales leave the grid too coarse to read as a continuum
    approximation."""


@dataclass(frozen=True)
class SweepRecord:
    scale: float
    n_points: int
    magnitude: float
    penguin: float | None
    residual_inf: float
    wall_time: float


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Per-scale magnitudes for one shape, sorted by scale."""

    shape: ShapeSpec
    n_points: int
    min_spacing: float
    records: tuple

    @property
    def scales(self) -> np.ndarray:
        return np.array([r.scale for r in self.records])

    @property
    def magnitudes(self) -> np.ndarray:
        return np.array([r.magnitude for r in self.records])


def _validated_scales(scales) -> tuple:
    ts = tuple(float(t) for t in scales)
    if not ts:
        raise ValueError("scales must be nonempty")
    for t in ts:
        if not (t > 0 and math.isfinite(t)):
            raise ValueError(f"scales must be positive and finite, got {t!r}")
    if len(set(ts)) != len(ts):
        raise ValueError("scales must be distinct")
    return tuple(sorted(ts))


def sweep(
    shape: ShapeSpec,
    scales,
    *,
    residual_gate: float = core.RESIDUAL_GATE,
    max_refinements: int = core.MAX_REFINEMENTS,
    torus_variant: str = "caption",
) -> SweepResult:
    """Solve the weight equations at every scale and record magnitudes.

    The closed-form valuation column is filled when the shape supports it.
    A solve failure aborts the sweep with SweepError carrying the records
    completed so far and the offending scale.  Scales whose scaled
    nearest-neighbor spacing exceeds 0.1 trigger one FinenessWarning.
    """
    ts = _validated_scales(scales)
    cloud = generate(shape)
    spacing = cloud.min_spacing()
    coarse = [t for t in ts if t * spacing > FINENESS_SPACING]
    if coarse:
        warnings.warn(
            f"scaled nearest-neighbor spacing exceeds {FINENESS_SPACING:g} at "
            f"t = {', '.join(f'{t:g}' for t in coarse)}; magnitudes there read "
            "as discrete, not continuum",
            FinenessWarning,
            stacklevel=2,
        )
    has_valuation = supports_valuation(shape)
    records = []
    for t in ts:
        start = time.perf_counter()
        kernel = core.build_kernel(cloud, t)
        try:
            weighting = core.solve_weighting(
                kernel,
                residual_gate=residual_gate,
                max_refinements=max_refinements,
            )
        except MagnitudeError as exc:
            raise SweepError(t, exc, tuple(records)) from exc
        mag = core.magnitude(weighting)
        del kernel
        value = penguin(shape, t, torus_variant=torus_variant) if has_valuation else None
        records.append(
            SweepRecord(
                scale=t,
                n_points=cloud.n_points,
                magnitude=mag,
                penguin=value,
                residual_inf=weighting.residual_inf,
                wall_time=time.perf_counter() - start,
            )
        )
    return SweepResult(
        shape=shape,
        n_points=cloud.n_points,
        min_spacing=spacing,
        records=tuple(records),
    )


def bulk_normalized_weights(cloud: PointCloud, weighting: Weighting) -> np.ndarray:
    """n! * omega_n * w_x / vol(V_x), with cell volumes scaled to the size
    the weighting was solved at.  Reads ~1 deep inside a large region."""
    if cloud.cell_volume is None:
        raise MissingCellDataError(
            f"cloud {cloud.provenance} carries no cell volumes; "
            "bulk normalization is undefined"
        )
    if cloud.n_points != weighting.n:
        raise ValueError(
            f"cloud has {cloud.n_points} points but weighting has {weighting.n}"
        )
    n = cloud.lattice_dim
    volumes = np.asarray(cloud.cell_volume) * weighting.scale**n
    return math.factorial(n) * omega(n) * weighting.weights / volumes


@dataclass(frozen=True, eq=False)
class EdgeProfile:
    """Bulk-normalized weights along half of a square grid's middle row,
    from the edge point (d = 0) to the center, as (distance, value) pairs.

    The value at distance d reads as 1 + h(d) for the empirical edge
    correction h; no closed form is known.
    """

    samples: tuple
    shape: ShapeSpec
    scale: float

    @property
    def distances(self) -> np.ndarray:
        return np.array([d for d, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.samples])

    def tail(self, min_distance: float) -> np.ndarray:
        """Values at distance >= min_distance, excluding the sample nearest
        the edge (index 1), which runs far more negative than the rest of
        the profile and would dominate any tail statistic."""
        return np.array(
            [
                v
                for i, (d, v) in enumerate(self.samples)
                if d >= min_distance and i != 1
            ]
        )


def edge_profile(square_cloud: PointCloud, weighting: Weighting) -> EdgeProfile:
    """Middle-row edge profile of a solved square grid.

    Requires an odd points-per-side square-grid cloud (so a middle row
    exists); emits the half-row up to the center, mirroring excluded.
    """
    prov = square_cloud.provenance
    if not (isinstance(prov, ShapeSpec) and prov.kind == "square"):
        raise UnsupportedShapeError(
            f"edge profile needs a square-grid cloud, got {prov}"
        )
    m = prov.param("m")
    if m % 2 == 0:
        raise UnsupportedShapeError(
            f"edge profile needs an odd points-per-side grid (middle row), got m={m}"
        )
    values = bulk_normalized_weights(square_cloud, weighting)
    mid = (m - 1) // 2
    h = 1.0 / (m - 1)
    t = weighting.scale
    samples = tuple(
        (t * ix * h, float(values[ix * m + mid])) for ix in range(mid + 1)
    )
    return EdgeProfile(samples=samples, shape=prov, scale=t)


def lattice_sum_check(n: int, spacing: float, cutoff_radius: float) -> float:
    """Riemann sum of exp(-|x|) * spacing^n over the cubic lattice within
    |x| <= cutoff_radius; approaches n! * omega_n as the spacing shrinks."""
    if n not in (1, 2, 3):
        raise ValueError(f"lattice dimension must be 1, 2 or 3, got {n}")
    spacing = float(spacing)
    if not 0.0 < spacing <= 0.5:
        raise ValueError(f"spacing must be in (0, 0.5], got {spacing}")
    cutoff_radius = float(cutoff_radius)
    if not cutoff_radius >= 20.0:
        raise ValueError(f"cutoff radius must be >= 20, got {cutoff_radius}")
    return float(backend.lattice_sum(n, spacing, cutoff_radius))


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares power law magnitude ~ coefficient * t^exponent over a
    scale window, fitted in log-log space."""

    exponent: float
    coefficient: float
    window: tuple
    rms_residual: float
    n_records: int


def _window(window) -> tuple:
    lo, hi = (float(w) for w in window)
    if not (0 < lo < hi):
        raise ValueError(f"window must satisfy 0 < t_min < t_max, got {window!r}")
    return lo, hi


def fit_power_law(scales, magnitudes, window, *, min_records: int = 4) -> GrowthFit:
    """Fit log(magnitude) vs log(scale) over the in-window records."""
    lo, hi = _window(window)
    ts = np.asarray(scales, dtype=np.float64)
    ms = np.asarray(magnitudes, dtype=np.float64)
    mask = (ts >= lo) & (ts <= hi)
    if int(mask.sum()) < min_records:
        raise ValueError(
            f"power-law fit needs >= {min_records} records in window "
            f"[{lo:g}, {hi:g}], got {int(mask.sum())}"
        )
    if not np.all(ms[mask] > 0):
        raise ValueError("magnitudes must be positive to fit in log space")
    logt = np.log(ts[mask])
    logm = np.log(ms[mask])
    slope, intercept = np.polyfit(logt, logm, 1)
    rms = float(np.sqrt(np.mean((logm - (slope * logt + intercept)) ** 2)))
    return GrowthFit(
        exponent=float(slope),
        coefficient=float(np.exp(intercept)),
        window=(lo, hi),
        rms_residual=rms,
        n_records=int(mask.sum()),
    )


def _fit_records(sweep_result: SweepResult, include_saturated: bool):
    if include_saturated:
        return sweep_result.records
    return tuple(
        r
        for r in sweep_result.records
        if r.scale * sweep_result.min_spacing <= SATURATION_SPACING
    )


def growth_rate(
    sweep_result: SweepResult,
    window,
    *,
    include_saturated: bool = False,
    min_records: int = 4,
) -> GrowthFit:
    """Asymptotic growth exponent of the magnitude over a scale window.

    Saturated records (scaled spacing > 1, where the magnitude just counts
    points) are excluded by default; the window itself is the caller's
    choice and is never auto-selected.
    """
    records = _fit_records(sweep_result, include_saturated)
    return fit_power_law(
        [r.scale for r in records],
        [r.magnitude for r in records],
        window,
        min_records=min_records,
    )


def saturation_knee(sweep_result: SweepResult) -> float | None:
    """First scale whose magnitude exceeds 0.9 * N, if any.  Reported for
    window-picking; never applied automatically."""
    for r in sweep_result.records:
        if r.magnitude > 0.9 * sweep_result.n_points:
            return r.scale
    return None


@dataclass(frozen=True)
class DoublingResidual:
    """Mismatch of one (t, 2t) record pair against the gasket recursion
    mag(2t) = 3 * mag(t) - 3."""

    t_low: float
    t_high: float
    absolute: float
    relative: float


@dataclass(frozen=True)
class SierpinskiFit:
    """Gasket growth model mag(t) ~ coefficient * t^log2(3) + 3/2 with the
    exponent held fixed, plus the doubling-pair residuals."""

    coefficient: float
    exponent: float
    residuals: tuple
    window: tuple


def sierpinski_fit(
    sweep_result: SweepResult, window, *, include_saturated: bool = False
) -> SierpinskiFit:
    """Fit the gasket's self-similar growth over a scale window.

    The gasket at scale 2t is three scale-t copies sharing three corner
    points, so asymptotically mag(2t) = 3 * mag(t) - 3; the general
    solution is c * t^log2(3) + 3/2.  c is fitted by least squares with
    the exponent fixed, and every in-window (t, 2t) pair is scored against
    the recursion.
    """
    lo, hi = _window(window)
    records = [
        r
        for r in _fit_records(sweep_result, include_saturated)
        if lo <= r.scale <= hi
    ]
    if not records:
        raise ValueError(f"no records inside window [{lo:g}, {hi:g}]")
    alpha = GASKET_EXPONENT
    powers = np.array([r.scale**alpha for r in records])
    shifted = np.array([r.magnitude - 1.5 for r in records])
    coefficient = float(shifted @ powers / (powers @ powers))

    residuals = []
    for r in records:
        for r2 in records:
            if math.isclose(r2.scale, 2.0 * r.scale, rel_tol=1e-9):
                absolute = abs(r2.magnitude - (3.0 * r.magnitude - 3.0))
                residuals.append(
                    DoublingResidual(
                        t_low=r.scale,
                        t_high=r2.scale,
                        absolute=absolute,
                        relative=absolute / r2.magnitude,
                    )
                )
    if not residuals:
        raise ValueError(
            f"window [{lo:g}, {hi:g}] contains no (t, 2t) scale pairs"
        )
    return SierpinskiFit(
        coefficient=coefficient,
        exponent=alpha,
        residuals=tuple(residuals),
        window=(lo, hi),
    )


def deviation_series(sweep_result: SweepResult) -> tuple:
    """Ordered (t, magnitude - penguin) differences.

    Small at all scales for convex shapes; for the bent line the series
    approaches a small nonzero constant, which is reported, not asserted.
    """
    missing = [r.scale for r in sweep_result.records if r.penguin is None]
    if missing:
        raise UnsupportedShapeError(
            f"sweep of {sweep_result.shape} has no valuation column"
        )
    return tuple((r.scale, r.magnitude - r.penguin) for r in sweep_result.records)
