"""Closed-form penguin valuation P(X) = sum_i mu_i(X) / (i! omega_i).

mu_i are the intrinsic volumes (mu_0 the Euler characteristic, mu_(n-1)
half the boundary measure, mu_n the volume) and omega_i the unit-ball
volumes.  The valuation conjecturally approximates the magnitude of the
convex bodies at large scale; for the non-convex shapes here it is the
natural extrapolation and part of what the experiments probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnsupportedShapeError
from .shapes import ShapeSpec

_OMEGA = (1.0, 2.0, math.pi, 4.0 * math.pi / 3.0)


def omega(n: int) -> float:
    """Volume of the unit n-ball, n = 0..3."""
    if not 0 <= n <= 3:
        raise ValueError(f"omega(n) tabulated for n = 0..3 only, got {n}")
    return _OMEGA[n]


# Intrinsic volumes of the unit-sized reference bodies; entry i scales as
# t^i.  The torus carries only its surface-area term (4 pi^2 / 5): its
# lower intrinsic volumes are not available in closed form here, and the
# area term alone already fixes the leading large-t behaviour.
_BASE_VOLUMES: dict[str, tuple[float, ...]] = {
    "point": (1.0,),
    "segment": (1.0, 1.0),
    "bent_line": (1.0, 2.0),
    "square": (1.0, 2.0, 1.0),
    "disc": (1.0, math.pi, math.pi),
    "cube": (1.0, 3.0, 3.0, 1.0),
    "annulus": (0.0, 1.5 * math.pi, 0.75 * math.pi),
    "torus": (0.0, 0.0, 0.8 * math.pi**2),
}


@dataclass(frozen=True)
class IntrinsicVolumes:
    """mu_0 .. mu_k of a shape scaled by ``scale``."""

    values: tuple
    shape: ShapeSpec
    scale: float


def supports_valuation(spec: ShapeSpec) -> bool:
    return spec.kind in _BASE_VOLUMES


def intrinsic_volumes(spec: ShapeSpec, scale: float) -> IntrinsicVolumes:
    """Intrinsic volumes of ``scale`` times the unit reference body, via
    the homogeneity mu_i(tX) = t^i mu_i(X)."""
    if not (scale > 0 and math.isfinite(scale)):
        raise ValueError(f"scale must be positive and finite, got {scale}")
    base = _BASE_VOLUMES.get(spec.kind)
    if base is None:
        raise UnsupportedShapeError(
            f"no intrinsic-volume table for shape kind {spec.kind!r}"
        )
    values = tuple(mu * scale**i for i, mu in enumerate(base))
    return IntrinsicVolumes(values=values, shape=spec, scale=float(scale))


#: Two closed forms for the torus are in circulation and disagree:
#: t^2/10 ("caption", the default here) and 0.4*pi*t^2 ("curve"), the
#: latter being what the area term in the mu table gives.  Both are
#: exposed so the discrepancy stays visible; the curve variant is the
#: one that tracks computed magnitudes.
TORUS_VARIANTS = ("caption", "curve")


def penguin(spec: ShapeSpec, scale: float, *, torus_variant: str = "caption") -> float:
    """P(scale * X) = sum_i mu_i / (i! omega_i).

    Reproduces the closed forms: segment t/2 + 1; bent line L/2 + 1;
    square t^2/(2 pi) + t + 1; disc t^2/2 + pi t/2 + 1; cube
    t^3/(8 pi) + 3 t^2/(2 pi) + 3t/2 + 1; annulus 3 t^2/8 + 3 pi t/4.
    For the torus see TORUS_VARIANTS.
    """
    if torus_variant not in TORUS_VARIANTS:
        raise ValueError(
            f"torus_variant must be one of {TORUS_VARIANTS}, got {torus_variant!r}"
        )
    if spec.kind == "torus" and torus_variant == "caption":
        if not (scale > 0 and math.isfinite(scale)):
            raise ValueError(f"scale must be positive and finite, got {scale}")
        return scale * scale / 10.0
    iv = intrinsic_volumes(spec, scale)
    return math.fsum(
        mu / (math.factorial(i) * omega(i)) for i, mu in enumerate(iv.values)
    )


def bulk_weight(n: int, cell_volume: float) -> float:
    """Predicted deep-interior weight of a lattice point: vol(V) / (n! omega_n)."""
    if not 1 <= n <= 3:
        raise ValueError(f"lattice dimension must be 1..3, got {n}")
    if not (cell_volume > 0 and math.isfinite(cell_volume)):
        raise ValueError(f"cell volume must be positive and finite, got {cell_volume}")
    return cell_volume / (math.factorial(n) * omega(n))
