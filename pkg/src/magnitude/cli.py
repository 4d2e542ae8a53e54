"""Command-line surface.

Data goes to stdout (or --output) as tab-separated tables with a '#'
header; diagnostics and errors go to stderr.  Exit codes: 0 success,
2 usage, 3 solver failure, 4 unsupported shape/valuation combination,
5 input/output failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import os
import sys

import numpy as np

from . import core
from .analysis import (
    SweepRecord,
    SweepResult,
    bulk_normalized_weights,
    edge_profile,
    growth_rate,
    lattice_sum_check,
    sierpinski_fit,
)
from .errors import (
    DuplicatePointsError,
    IllConditionedError,
    ManifestError,
    MissingCellDataError,
    NotHomogeneousError,
    SweepError,
    TableFormatError,
    UnsupportedShapeError,
)
from .manifest import RunManifest, load_manifest, run, save_manifest, sweep_table
from .shapes import SHAPE_KINDS, ShapeSpec, generate
from .tables import Table, atomic_write_text, read_table, write_table
from .valuation import TORUS_VARIANTS, omega

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_UNSUPPORTED = 4
EXIT_IO = 5

DEFAULT_SCALES = "0.1:1000:log:25"

_PARAM_FLAGS = ("m", "angle", "target_n", "n_r", "n_theta", "level")


def parse_scales(text: str) -> tuple:
    """Either 'min:max:log:count' or a comma-separated list of values."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4 or parts[2] != "log":
            raise ValueError(
                f"scale range must look like 'min:max:log:count', got {text!r}"
            )
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[3])
        except ValueError:
            raise ValueError(f"bad scale range {text!r}") from None
        if not (0 < lo < hi) or count < 2:
            raise ValueError(
                f"scale range needs 0 < min < max and count >= 2, got {text!r}"
            )
        return tuple(float(t) for t in np.geomspace(lo, hi, count))
    try:
        return tuple(float(f) for f in text.split(","))
    except ValueError:
        raise ValueError(f"bad scale list {text!r}") from None


def _build_spec(args) -> ShapeSpec:
    if not args.shape:
        raise ValueError("--shape is required")
    kind = SHAPE_KINDS[args.shape]
    expected = tuple(name for name, _ in kind.params)
    params = {}
    for name in _PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is None:
            continue
        if name not in expected:
            flag = "--" + name.replace("_", "-")
            raise ValueError(f"{flag} does not apply to shape {args.shape!r}")
        params[name] = value
    missing = [n for n in expected if n not in params]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ValueError(f"shape {args.shape!r} requires {flags}")
    return ShapeSpec(args.shape, params)


def _solve_cloud(args):
    spec = _build_spec(args)
    cloud = generate(spec)
    kernel = core.build_kernel(cloud, args.t)
    gate = getattr(args, "residual_gate", core.RESIDUAL_GATE)
    weighting = core.solve_weighting(kernel, residual_gate=gate)
    return cloud, weighting


def _emit(table: Table, output) -> None:
    write_table(table, output if output else sys.stdout)


def _cmd_magnitude(args) -> int:
    _, weighting = _solve_cloud(args)
    table = Table(
        columns=("magnitude", "residual_inf"),
        rows=[[core.magnitude(weighting), weighting.residual_inf]],
    )
    _emit(table, args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.manifest:
        conflicts = [
            flag
            for flag, value in (
                ("--shape", args.shape),
                ("--output", args.output),
                ("--emit-manifest", args.emit_manifest),
            )
            if value
        ]
        if args.scales != DEFAULT_SCALES:
            conflicts.append("--scales")
        if conflicts:
            raise ValueError(
                f"--manifest is exclusive with {', '.join(conflicts)}"
            )
        manifest = load_manifest(args.manifest)
    else:
        manifest = RunManifest(
            shape=_build_spec(args),
            scales=parse_scales(args.scales),
            residual_gate=args.residual_gate,
            torus_variant=args.torus_variant,
            output=args.output,
        )
        if args.emit_manifest:
            save_manifest(manifest, args.emit_manifest)
    result = run(manifest)
    if manifest.output is None:
        _emit(sweep_table(result), None)
    return EXIT_OK


def _cmd_weights(args) -> int:
    cloud, weighting = _solve_cloud(args)
    try:
        normalized = bulk_normalized_weights(cloud, weighting)
    except MissingCellDataError:
        normalized = np.full(cloud.n_points, math.nan)
    coord_names = ("x", "y", "z")[: cloud.dim]
    table = Table(
        columns=coord_names + ("weight", "normalized_weight"),
        rows=np.column_stack([cloud.points, weighting.weights, normalized]),
    )
    _emit(table, args.output)
    return EXIT_OK


def _cmd_profile(args) -> int:
    cloud, weighting = _solve_cloud(args)
    profile = edge_profile(cloud, weighting)
    table = Table(
        columns=("d", "normalized_weight"),
        rows=[[d, v] for d, v in profile.samples],
    )
    _emit(table, args.output)
    return EXIT_OK


def _cmd_lattice_sum(args) -> int:
    value = lattice_sum_check(args.dim, args.spacing, args.cutoff)
    target = math.factorial(args.dim) * omega(args.dim)
    table = Table(columns=("sum", "target"), rows=[[value, target]])
    _emit(table, args.output)
    return EXIT_OK


def _sweep_from_table(table: Table, min_spacing: float) -> SweepResult:
    try:
        scales = table.column("t")
        magnitudes = table.column("magnitude")
    except KeyError:
        raise ValueError(
            f"input table needs 't' and 'magnitude' columns, got {table.columns}"
        ) from None
    try:
        n_points = int(table.column("n_points")[0]) if table.n_rows else 0
    except KeyError:
        n_points = 0
    order = np.argsort(scales)
    records = tuple(
        SweepRecord(
            scale=float(scales[i]),
            n_points=n_points,
            magnitude=float(magnitudes[i]),
            penguin=None,
            residual_inf=0.0,
            wall_time=0.0,
        )
        for i in order
    )
    return SweepResult(
        shape=ShapeSpec("custom"),
        n_points=n_points,
        min_spacing=float(min_spacing),
        records=records,
    )


def _cmd_fit(args) -> int:
    table = read_table(args.input)
    result = _sweep_from_table(table, args.min_spacing)
    window = tuple(args.window)
    if args.kind == "growth":
        fit = growth_rate(
            result, window, include_saturated=args.include_saturated
        )
        out = Table(
            columns=("exponent", "coefficient", "rms_residual", "n_records"),
            rows=[[fit.exponent, fit.coefficient, fit.rms_residual, fit.n_records]],
        )
    else:
        fit = sierpinski_fit(
            result, window, include_saturated=args.include_saturated
        )
        out = Table(
            columns=(
                "coefficient",
                "exponent",
                "t_low",
                "t_high",
                "residual",
                "rel_residual",
            ),
            rows=[
                [fit.coefficient, fit.exponent, r.t_low, r.t_high, r.absolute, r.relative]
                for r in fit.residuals
            ],
        )
    _emit(out, args.output)
    return EXIT_OK


def _cmd_shapes_list(args) -> int:
    lines = ["#kind\tparams\tdescription"]
    for name in sorted(SHAPE_KINDS):
        kind = SHAPE_KINDS[name]
        params = "; ".join(f"{p}: {help_}" for p, help_ in kind.params) or "-"
        lines.append(f"{name}\t{params}\t{kind.description}")
    text = "\n".join(lines) + "\n"
    if args.output:
        atomic_write_text(text, args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnitude",
        description="Magnitude of finite metric approximations to compact "
        "subsets of Euclidean space.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="cap linear-algebra threads (also env MAGNITUDE_THREADS)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    shape_parent = argparse.ArgumentParser(add_help=False)
    shape_parent.add_argument(
        "--shape", choices=sorted(SHAPE_KINDS), help="shape kind (see shapes-list)"
    )
    shape_parent.add_argument("--m", type=int, help="grid resolution")
    shape_parent.add_argument("--angle", type=float, help="bent-line angle (radians)")
    shape_parent.add_argument("--target-n", type=int, dest="target_n")
    shape_parent.add_argument("--n-r", type=int, dest="n_r")
    shape_parent.add_argument("--n-theta", type=int, dest="n_theta")
    shape_parent.add_argument("--level", type=int, help="fractal recursion depth")

    out_parent = argparse.ArgumentParser(add_help=False)
    out_parent.add_argument(
        "-o", "--output", default=None, help="write the table here (default stdout)"
    )

    p = sub.add_parser(
        "magnitude",
        parents=[shape_parent, out_parent],
        help="one magnitude at one scale",
    )
    p.add_argument("--t", type=float, required=True, help="scale factor")
    p.add_argument("--residual-gate", type=float, default=core.RESIDUAL_GATE)
    p.set_defaults(handler=_cmd_magnitude)

    p = sub.add_parser(
        "sweep",
        parents=[shape_parent, out_parent],
        help="magnitudes across a scale range",
    )
    p.add_argument(
        "--scales",
        default=DEFAULT_SCALES,
        help=f"'min:max:log:count' or 'a,b,c' (default {DEFAULT_SCALES})",
    )
    p.add_argument("--residual-gate", type=float, default=core.RESIDUAL_GATE)
    p.add_argument("--torus-variant", choices=TORUS_VARIANTS, default="caption")
    p.add_argument("--manifest", help="run this manifest file instead of flags")
    p.add_argument("--emit-manifest", help="save the run description here")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser(
        "weights",
        parents=[shape_parent, out_parent],
        help="per-point weights and bulk-normalized weights",
    )
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--residual-gate", type=float, default=core.RESIDUAL_GATE)
    p.set_defaults(handler=_cmd_weights)

    p = sub.add_parser(
        "profile",
        parents=[shape_parent, out_parent],
        help="middle-row edge profile of a square grid",
    )
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--residual-gate", type=float, default=core.RESIDUAL_GATE)
    p.set_defaults(handler=_cmd_profile)

    p = sub.add_parser(
        "lattice-sum",
        parents=[out_parent],
        help="Riemann sum of exp(-|x|) vs the bulk constant n!*omega_n",
    )
    p.add_argument("--dim", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--spacing", type=float, required=True)
    p.add_argument("--cutoff", type=float, default=40.0)
    p.set_defaults(handler=_cmd_lattice_sum)

    p = sub.add_parser(
        "fit",
        parents=[out_parent],
        help="power-law or gasket fit of a sweep table",
    )
    p.add_argument("--input", required=True, help="sweep table (TSV)")
    p.add_argument(
        "--window", nargs=2, type=float, required=True, metavar=("TMIN", "TMAX")
    )
    p.add_argument("--kind", choices=("growth", "sierpinski"), default="growth")
    p.add_argument(
        "--min-spacing",
        type=float,
        default=0.0,
        help="unscaled nearest-neighbor spacing, enables saturation exclusion",
    )
    p.add_argument("--include-saturated", action="store_true")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser(
        "shapes-list", parents=[out_parent], help="available shapes and parameters"
    )
    p.set_defaults(handler=_cmd_shapes_list)

    return parser


def _error(category: str, exc: BaseException) -> None:
    message = " ".join(str(exc).split())
    print(f"error: {category}: {message}", file=sys.stderr)


def _thread_limit(args):
    limit = args.threads
    if limit is None:
        env = os.environ.get("MAGNITUDE_THREADS", "").strip()
        if env:
            limit = int(env)
    if limit is None:
        return contextlib.nullcontext()
    if limit < 1:
        raise ValueError(f"thread limit must be >= 1, got {limit}")
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=limit)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else (EXIT_OK if code is None else EXIT_USAGE)
    try:
        with _thread_limit(args):
            return args.handler(args)
    except (
        DuplicatePointsError,
        IllConditionedError,
        NotHomogeneousError,
        SweepError,
    ) as exc:
        _error("solver", exc)
        return EXIT_SOLVER
    except (UnsupportedShapeError, MissingCellDataError) as exc:
        _error("unsupported", exc)
        return EXIT_UNSUPPORTED
    except (TableFormatError, ManifestError, OSError) as exc:
        _error("io", exc)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        _error("usage", exc)
        return EXIT_USAGE


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
