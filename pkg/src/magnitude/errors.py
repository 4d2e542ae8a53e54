"""Exception hierarchy shared across the package."""


class MagnitudeError(Exception):
    """Base class for all package-specific failures."""


class DuplicatePointsError(MagnitudeError):
    """Two points coincide, so the kernel matrix is singular."""

    def __init__(self, i: int, j: int):
        self.indices = (i, j)
        super().__init__(f"points {i} and {j} coincide; kernel would be singular")


class IllConditionedError(MagnitudeError):
    """The solved weighting failed the residual gate."""

    def __init__(self, residual: float, gate: float, solver_tag: str):
        self.residual = residual
        self.gate = gate
        self.solver_tag = solver_tag
        super().__init__(
            f"residual {residual:.3e} exceeds gate {gate:.1e} "
            f"(solver = {solver_tag}); system too ill-conditioned"
        )


class NotHomogeneousError(MagnitudeError):
    """Kernel row sums disagree, so the one-row shortcut is invalid."""

    def __init__(self, max_relative_deviation: float, tol: float):
        self.max_relative_deviation = max_relative_deviation
        super().__init__(
            f"kernel row sums deviate by {max_relative_deviation:.3e} relative "
            f"(tolerance {tol:.1e}); point cloud is not vertex-transitive "
            "under this metric"
        )


class UnsupportedShapeError(MagnitudeError):
    """No closed-form valuation is known for this shape."""


class MissingCellDataError(MagnitudeError):
    """The cloud carries no lattice cell volumes, so weights cannot be
    normalized to a density."""


class SweepError(MagnitudeError):
    """A scale inside a sweep failed; completed records are preserved."""

    def __init__(self, scale: float, cause: MagnitudeError, records: tuple):
        self.scale = scale
        self.cause = cause
        self.records = records
        super().__init__(f"sweep failed at scale t={scale:g}: {cause}")


class TableFormatError(MagnitudeError):
    """A table stream violates the on-disk format."""


class ManifestError(MagnitudeError):
    """A run manifest is malformed or inconsistent."""
