"""Finite approximations to reference bodies.

Every generator returns a unit-sized body (side, radius, or arm length 1);
larger copies are obtained by scaling distances through the kernel, never
by moving the points.  Lattice-based shapes carry the Voronoi cell volume
of each point so weights can later be normalized to a density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .core import PointCloud

MAX_FRACTAL_POINTS = 100_000


@dataclass(frozen=True)
class ShapeSpec:
    """Portable description of a generated shape: a kind tag plus its
    resolution parameters, canonicalized for equality and serialization."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        raw = self.params
        if isinstance(raw, Mapping):
            items = raw.items()
        else:
            items = tuple(raw)
        canon = tuple(sorted((str(k), v) for k, v in items))
        object.__setattr__(self, "params", canon)

    @property
    def params_dict(self) -> dict:
        return dict(self.params)

    def param(self, name: str):
        try:
            return self.params_dict[name]
        except KeyError:
            raise KeyError(f"shape {self.kind!r} has no parameter {name!r}") from None

    def __str__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}({inner})"


def _require_int(name: str, value, minimum: int) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def gen_point() -> PointCloud:
    """A single point at the origin (magnitude 1 at every scale)."""
    spec = ShapeSpec("point")
    return PointCloud(points=np.zeros((1, 1)), provenance=spec)


def gen_segment(m: int) -> PointCloud:
    """Unit segment sampled at m evenly spaced points, spacing 1/(m-1)."""
    m = _require_int("m", m, 2)
    spec = ShapeSpec("segment", {"m": m})
    xs = np.linspace(0.0, 1.0, m).reshape(-1, 1)
    h = 1.0 / (m - 1)
    return PointCloud(points=xs, cell_volume=h, lattice_dim=1, provenance=spec)


def gen_circle(m: int) -> PointCloud:
    """m equally spaced points on the radius-1 circle.

    Homogeneous, so valid input for the one-row magnitude shortcut."""
    m = _require_int("m", m, 2)
    spec = ShapeSpec("circle", {"m": m})
    theta = 2.0 * math.pi * np.arange(m) / m
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    return PointCloud(
        points=pts, cell_volume=2.0 * math.pi / m, lattice_dim=1, provenance=spec
    )


def gen_bent_line(m: int, angle: float) -> PointCloud:
    """Two unit arms of m points each sharing one endpoint (2m-1 points),
    meeting at the given interior angle, in the plane's chord metric.

    angle = pi is the degenerate straight case: isometric to a single
    segment of 2m-1 points.
    """
    m = _require_int("m", m, 2)
    angle = float(angle)
    if not (0.0 < angle <= math.pi):
        raise ValueError(f"angle must be in (0, pi], got {angle!r}")
    spec = ShapeSpec("bent_line", {"m": m, "angle": angle})
    s = np.arange(m - 1, 0, -1) / (m - 1)
    arm_a = np.column_stack([s * math.cos(angle), s * math.sin(angle)])
    s = np.arange(1, m) / (m - 1)
    arm_b = np.column_stack([s, np.zeros(m - 1)])
    pts = np.vstack([arm_a, [[0.0, 0.0]], arm_b])
    h = 1.0 / (m - 1)
    return PointCloud(points=pts, cell_volume=h, lattice_dim=1, provenance=spec)


def gen_square_grid(m: int) -> PointCloud:
    """m x m grid on the unit square, spacing h = 1/(m-1), cell area h^2."""
    m = _require_int("m", m, 2)
    spec = ShapeSpec("square", {"m": m})
    ax = np.linspace(0.0, 1.0, m)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    h = 1.0 / (m - 1)
    return PointCloud(points=pts, cell_volume=h * h, lattice_dim=2, provenance=spec)


def gen_cube_grid(m: int) -> PointCloud:
    """m^3 grid on the unit cube, spacing 1/(m-1), cell volume h^3."""
    m = _require_int("m", m, 2)
    spec = ShapeSpec("cube", {"m": m})
    ax = np.linspace(0.0, 1.0, m)
    X, Y, Z = np.meshgrid(ax, ax, ax, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    h = 1.0 / (m - 1)
    return PointCloud(points=pts, cell_volume=h**3, lattice_dim=3, provenance=spec)


def _gauss_count(s: int) -> int:
    # number of integer pairs with i^2 + j^2 <= s
    total = 0
    for i in range(-math.isqrt(s), math.isqrt(s) + 1):
        total += 2 * math.isqrt(s - i * i) + 1
    return total


def gen_disc_grid(target_n: int) -> PointCloud:
    """Origin-centered square lattice clipped to the closed unit disc.

    The spacing is 1/sqrt(s) for the smallest integer s whose lattice-point
    count inside radius sqrt(s) reaches target_n, i.e. the coarsest lattice
    achieving the requested size; the actual count may slightly exceed it.
    Membership is decided in exact integer arithmetic.
    """
    target_n = _require_int("target_n", target_n, 1)
    spec = ShapeSpec("disc", {"target_n": target_n})
    lo, hi = 0, 4
    while _gauss_count(hi) < target_n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if _gauss_count(mid) >= target_n:
            hi = mid
        else:
            lo = mid + 1
    s = hi
    h = 1.0 / math.sqrt(s) if s > 0 else 1.0
    rows = []
    for i in range(-math.isqrt(s), math.isqrt(s) + 1):
        jmax = math.isqrt(s - i * i)
        for j in range(-jmax, jmax + 1):
            rows.append((i * h, j * h))
    pts = np.array(rows)
    return PointCloud(points=pts, cell_volume=h * h, lattice_dim=2, provenance=spec)


def gen_annulus_polar(n_r: int, n_theta: int) -> PointCloud:
    """Polar grid on the annulus with outer radius 1 and inner radius 1/2:
    n_r radii (endpoints included) by n_theta angles.

    Cell areas are the exact annular-sector areas r * dr * dtheta, with the
    innermost and outermost rings truncated at the boundary (half-width
    cells), so the areas sum to the true area 3*pi/4 exactly.
    """
    n_r = _require_int("n_r", n_r, 2)
    n_theta = _require_int("n_theta", n_theta, 3)
    spec = ShapeSpec("annulus", {"n_r": n_r, "n_theta": n_theta})
    r_in, r_out = 0.5, 1.0
    dr = (r_out - r_in) / (n_r - 1)
    dtheta = 2.0 * math.pi / n_theta
    radii = r_in + dr * np.arange(n_r)
    inner_edge = np.maximum(radii - 0.5 * dr, r_in)
    outer_edge = np.minimum(radii + 0.5 * dr, r_out)
    ring_area = 0.5 * dtheta * (outer_edge**2 - inner_edge**2)
    theta = dtheta * np.arange(n_theta)
    R = np.repeat(radii, n_theta)
    T = np.tile(theta, n_r)
    pts = np.column_stack([R * np.cos(T), R * np.sin(T)])
    cells = np.repeat(ring_area, n_theta)
    return PointCloud(points=pts, cell_volume=cells, lattice_dim=2, provenance=spec)


def gen_torus_grid(m: int) -> PointCloud:
    """m x m angle grid on the torus with major radius 1 and minor radius
    1/5, no duplicated seam.

    Each point carries the exact surface-area element
    (2pi/m)^2 * (1/5) * (1 + cos(phi)/5); over a uniform phi-grid the
    cosine terms cancel, so the areas sum to 0.8 * pi^2.
    """
    m = _require_int("m", m, 3)
    spec = ShapeSpec("torus", {"m": m})
    r = 0.2
    angles = 2.0 * math.pi * np.arange(m) / m
    TH, PH = np.meshgrid(angles, angles, indexing="ij")
    ring = 1.0 + r * np.cos(PH)
    pts = np.column_stack(
        [
            (ring * np.cos(TH)).ravel(),
            (ring * np.sin(TH)).ravel(),
            (r * np.sin(PH)).ravel(),
        ]
    )
    cells = ((2.0 * math.pi / m) ** 2 * r * ring).ravel()
    return PointCloud(points=pts, cell_volume=cells, lattice_dim=2, provenance=spec)


def gen_sierpinski(level: int) -> PointCloud:
    """Vertex set of the level-k Sierpinski gasket on a unit-side
    equilateral triangle.

    Built by the three-copies recursion on an integer triangular lattice
    (so shared corners deduplicate exactly), then mapped to the plane.
    Gives (3^(k+1) + 3)/2 points with minimum spacing 2^-k; carries no
    cell volume (bulk normalization is undefined on a fractal).
    """
    level = _require_int("level", level, 0)
    expected = (3 ** (level + 1) + 3) // 2
    if expected > MAX_FRACTAL_POINTS:
        raise ValueError(
            f"sierpinski level {level} needs {expected} points "
            f"(cap {MAX_FRACTAL_POINTS})"
        )
    spec = ShapeSpec("sierpinski", {"level": level})
    cells = {(0, 0), (1, 0), (0, 1)}
    for k in range(level):
        step = 2**k
        cells = (
            cells
            | {(a + step, b) for a, b in cells}
            | {(a, b + step) for a, b in cells}
        )
    coords = sorted(cells)
    s = 0.5**level
    pts = np.array(
        [(s * (a + 0.5 * b), s * (0.5 * math.sqrt(3.0) * b)) for a, b in coords]
    )
    return PointCloud(points=pts, provenance=spec)


def gen_cantor(level: int) -> PointCloud:
    """Endpoints of the 2^k intervals of the level-k middle-thirds set:
    2^(k+1) points in [0, 1], minimum gap 3^-k."""
    level = _require_int("level", level, 0)
    if 2 ** (level + 1) > MAX_FRACTAL_POINTS:
        raise ValueError(
            f"cantor level {level} needs {2 ** (level + 1)} points "
            f"(cap {MAX_FRACTAL_POINTS})"
        )
    spec = ShapeSpec("cantor", {"level": level})
    lefts = [0]
    for _ in range(level):
        lefts = [3 * a for a in lefts] + [3 * a + 2 for a in lefts]
    denom = 3**level
    xs = sorted(x for a in lefts for x in (a, a + 1))
    pts = np.array(xs, dtype=np.float64).reshape(-1, 1) / denom
    return PointCloud(points=pts, provenance=spec)


@dataclass(frozen=True)
class _Kind:
    generator: Callable
    params: tuple  # (name, help) pairs, in call order
    description: str


SHAPE_KINDS: dict[str, _Kind] = {
    "point": _Kind(gen_point, (), "single point at the origin"),
    "segment": _Kind(
        gen_segment,
        (("m", "points along the segment (>= 2)"),),
        "unit segment sampled at m points",
    ),
    "circle": _Kind(
        gen_circle,
        (("m", "points around the circle (>= 2)"),),
        "unit circle sampled at m equally spaced points",
    ),
    "bent_line": _Kind(
        gen_bent_line,
        (
            ("m", "points per arm; 2m-1 total (>= 2)"),
            ("angle", "interior angle in (0, pi] radians"),
        ),
        "two unit arms joined at a corner",
    ),
    "square": _Kind(
        gen_square_grid,
        (("m", "points per side (>= 2)"),),
        "unit square on an m x m grid",
    ),
    "disc": _Kind(
        gen_disc_grid,
        (("target_n", "minimum number of points (>= 1)"),),
        "unit disc on the coarsest square lattice with >= target_n points",
    ),
    "cube": _Kind(
        gen_cube_grid,
        (("m", "points per edge (>= 2)"),),
        "unit cube on an m x m x m grid",
    ),
    "annulus": _Kind(
        gen_annulus_polar,
        (
            ("n_r", "radial rings (>= 2)"),
            ("n_theta", "points per ring (>= 3)"),
        ),
        "annulus with radii 1/2 and 1 on a polar grid",
    ),
    "torus": _Kind(
        gen_torus_grid,
        (("m", "points per angle; m^2 total (>= 3)"),),
        "torus with radii 1 and 1/5 on an m x m angle grid",
    ),
    "sierpinski": _Kind(
        gen_sierpinski,
        (("level", "subdivision depth (>= 0)"),),
        "vertex set of the level-k Sierpinski gasket, unit side",
    ),
    "cantor": _Kind(
        gen_cantor,
        (("level", "subdivision depth (>= 0)"),),
        "interval endpoints of the level-k middle-thirds set",
    ),
}


def generate(spec: ShapeSpec) -> PointCloud:
    """Materialize the point cloud a ShapeSpec describes (deterministic:
    equal specs give identical arrays).

    The parameter set must match the kind's schema exactly.
    """
    try:
        kind = SHAPE_KINDS[spec.kind]
    except KeyError:
        known = ", ".join(sorted(SHAPE_KINDS))
        raise ValueError(f"unknown shape kind {spec.kind!r} (known: {known})") from None
    expected = tuple(name for name, _ in kind.params)
    given = spec.params_dict
    missing = sorted(set(expected) - set(given))
    extra = sorted(set(given) - set(expected))
    if missing or extra:
        raise ValueError(
            f"shape {spec.kind!r}: missing params {missing}, unexpected {extra}"
        )
    return kind.generator(**{name: given[name] for name in expected})


def make(kind: str, **params) -> PointCloud:
    """Convenience wrapper: ``make("square", m=11)``."""
    return generate(ShapeSpec(kind, params))
