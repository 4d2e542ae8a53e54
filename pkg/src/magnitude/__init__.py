"""Numerical magnitude of finite metric spaces in Euclidean space.

Build an exponentiated-distance kernel over a point cloud, solve Z w = 1,
and sum the weights; compare against closed-form valuations and study
scaling behaviour.  See the README for the command-line surface.
"""

from .backend import BACKEND
from .core import (
    HOMOGENEITY_TOL,
    MAX_REFINEMENTS,
    RESIDUAL_GATE,
    KernelMatrix,
    PointCloud,
    Weighting,
    build_kernel,
    magnitude,
    residual,
    solve_weighting,
    speyer_magnitude,
)
from .errors import (
    DuplicatePointsError,
    IllConditionedError,
    MagnitudeError,
    ManifestError,
    MissingCellDataError,
    NotHomogeneousError,
    SweepError,
    TableFormatError,
    UnsupportedShapeError,
)
from .shapes import (
    SHAPE_KINDS,
    ShapeSpec,
    gen_annulus_polar,
    gen_bent_line,
    gen_cantor,
    gen_circle,
    gen_cube_grid,
    gen_disc_grid,
    gen_point,
    gen_segment,
    gen_sierpinski,
    gen_square_grid,
    gen_torus_grid,
    generate,
    make,
)
from .valuation import (
    IntrinsicVolumes,
    bulk_weight,
    intrinsic_volumes,
    omega,
    penguin,
    supports_valuation,
)
from .analysis import (
    EdgeProfile,
    FinenessWarning,
    GrowthFit,
    SierpinskiFit,
    SweepRecord,
    SweepResult,
    bulk_normalized_weights,
    deviation_series,
    edge_profile,
    fit_power_law,
    growth_rate,
    lattice_sum_check,
    saturation_knee,
    sierpinski_fit,
    sweep,
)
from .manifest import RunManifest, load_manifest, run, save_manifest, sweep_table
from .tables import Table, read_table, write_table

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HOMOGENEITY_TOL",
    "MAX_REFINEMENTS",
    "RESIDUAL_GATE",
    "KernelMatrix",
    "PointCloud",
    "Weighting",
    "build_kernel",
    "magnitude",
    "residual",
    "solve_weighting",
    "speyer_magnitude",
    "MagnitudeError",
    "DuplicatePointsError",
    "IllConditionedError",
    "ManifestError",
    "MissingCellDataError",
    "NotHomogeneousError",
    "SweepError",
    "TableFormatError",
    "UnsupportedShapeError",
    "SHAPE_KINDS",
    "ShapeSpec",
    "generate",
    "make",
    "gen_point",
    "gen_segment",
    "gen_circle",
    "gen_bent_line",
    "gen_square_grid",
    "gen_disc_grid",
    "gen_cube_grid",
    "gen_annulus_polar",
    "gen_torus_grid",
    "gen_sierpinski",
    "gen_cantor",
    "IntrinsicVolumes",
    "omega",
    "intrinsic_volumes",
    "penguin",
    "bulk_weight",
    "supports_valuation",
    "EdgeProfile",
    "FinenessWarning",
    "GrowthFit",
    "SierpinskiFit",
    "SweepRecord",
    "SweepResult",
    "bulk_normalized_weights",
    "deviation_series",
    "edge_profile",
    "fit_power_law",
    "growth_rate",
    "lattice_sum_check",
    "saturation_knee",
    "sierpinski_fit",
    "sweep",
    "RunManifest",
    "load_manifest",
    "save_manifest",
    "run",
    "sweep_table",
    "Table",
    "read_table",
    "write_table",
    "__version__",
]
