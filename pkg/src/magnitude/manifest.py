"""Run manifests: a complete, deterministic description of one sweep.

Everything in a manifest is seed-free, so two runs from the same manifest
produce byte-identical tables.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import core
from .analysis import SweepResult, sweep
from .errors import ManifestError
from .shapes import ShapeSpec
from .tables import Table, atomic_write_text, write_table
from .valuation import TORUS_VARIANTS

FORMAT = "magnitude-run/1"

SWEEP_COLUMNS = ("t", "n_points", "magnitude", "penguin", "residual_inf")


@dataclass(frozen=True)
class RunManifest:
    shape: ShapeSpec
    scales: tuple
    residual_gate: float = core.RESIDUAL_GATE
    max_refinements: int = core.MAX_REFINEMENTS
    torus_variant: str = "caption"
    output: str | None = None

    def __post_init__(self):
        if not isinstance(self.shape, ShapeSpec):
            raise ManifestError(f"shape must be a ShapeSpec, got {self.shape!r}")
        object.__setattr__(
            self, "scales", tuple(float(t) for t in self.scales)
        )
        if self.torus_variant not in TORUS_VARIANTS:
            raise ManifestError(f"bad torus_variant {self.torus_variant!r}")

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "shape": {"kind": self.shape.kind, "params": self.shape.params_dict},
            "scales": list(self.scales),
            "solver": {
                "residual_gate": self.residual_gate,
                "max_refinements": self.max_refinements,
            },
            "torus_variant": self.torus_variant,
            "output": self.output,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        try:
            if data.get("format", FORMAT) != FORMAT:
                raise ManifestError(f"unknown manifest format {data['format']!r}")
            shape = ShapeSpec(data["shape"]["kind"], data["shape"].get("params", {}))
            solver = data.get("solver", {})
            return cls(
                shape=shape,
                scales=tuple(data["scales"]),
                residual_gate=float(solver.get("residual_gate", core.RESIDUAL_GATE)),
                max_refinements=int(
                    solver.get("max_refinements", core.MAX_REFINEMENTS)
                ),
                torus_variant=data.get("torus_variant", "caption"),
                output=data.get("output"),
            )
        except ManifestError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"malformed manifest: {exc}") from exc


def save_manifest(manifest: RunManifest, path) -> None:
    text = json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
    atomic_write_text(text, path)


def load_manifest(path) -> RunManifest:
    try:
        with open(path, "r", encoding="utf-8") as stream:
            data = json.load(stream)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ManifestError("manifest root must be a JSON object")
    return RunManifest.from_dict(data)


def sweep_table(result: SweepResult) -> Table:
    """Tabulate a sweep: wall times are dropped so the bytes depend only
    on the manifest, and a missing valuation column becomes nan."""
    rows = [
        (
            r.scale,
            float(r.n_points),
            r.magnitude,
            r.penguin if r.penguin is not None else math.nan,
            r.residual_inf,
        )
        for r in result.records
    ]
    return Table(
        columns=SWEEP_COLUMNS,
        rows=np.array(rows) if rows else np.empty((0, len(SWEEP_COLUMNS))),
    )


def run(manifest: RunManifest) -> SweepResult:
    """Execute the manifest's sweep and write its table if an output path
    is set; returns the in-memory result either way."""
    result = sweep(
        manifest.shape,
        manifest.scales,
        residual_gate=manifest.residual_gate,
        max_refinements=manifest.max_refinements,
        torus_variant=manifest.torus_variant,
    )
    if manifest.output is not None:
        write_table(sweep_table(result), manifest.output)
    return result
