"""Command line interface: sample, distances, spread, estimate, smooth, local,
oracle and repro subcommands over CSV files.

Exit codes: 0 success, 2 malformed input (CSV or grid spec), 3 invariant
violation, 4 domain error (a quantity requested outside its mathematical
domain). Diagnostics go to stderr; when no --out file is given, data goes to
stdout, otherwise stdout stays silent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import engine, exact, heuristics, io, sampling, smoothing
from .errors import DomainError, ParseError, ValidationError
from .metric import (
    DEFAULT_BLOCK_SIZE,
    DistanceBlocks,
    euclidean_distances,
    geodesic_circle_distances,
    require_distance_matrix,
    validate_distance_matrix,
)

THREADS_ENV_VAR = "SPREADIM_THREADS"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DOMAIN = 4


def log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _default_threads() -> int | None:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None


def parse_grid_spec(spec: str):
    """Parse 'auto' or 'MIN:MAX:COUNT[:log|linear]' into a grid or the string 'auto'."""
    if spec == "auto":
        return "auto"
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ParseError(
            f"grid spec must be 'auto' or 'MIN:MAX:COUNT[:log|linear]', got {spec!r}"
        )
    try:
        t_min = float(parts[0])
        t_max = float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ParseError(f"bad grid spec {spec!r}: {exc}") from None
    spacing = parts[3] if len(parts) == 4 else "log"
    if spacing not in ("log", "linear"):
        raise ParseError(f"grid spacing must be 'log' or 'linear', got {spacing!r}")
    return engine.make_grid(t_min, t_max, count, spacing=spacing)


def _load_source(args):
    """Resolve --in/--input-kind/--metric into a distance source for the engine."""
    if args.infile is None:
        raise ValidationError("an input file is required (--in)")
    kind = args.input_kind
    if kind == "matrix":
        return require_distance_matrix(io.read_distance_matrix_csv(args.infile))
    if args.metric == "geodesic-circle":
        angles = io.read_angles_csv(args.infile)
        return geodesic_circle_distances(angles)
    points = io.read_point_cloud_csv(args.infile)
    if points.shape[0] > 8192:
        return DistanceBlocks(points, block_size=args.block_size)
    return euclidean_distances(points, block_size=args.block_size)


def _emit_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> int:
    shape = args.shape.replace("-", "_")
    if shape == "circle":
        points, angles = sampling.sample_circle(args.count, args.seed)
        if args.angles_out:
            io.write_angles_csv(args.angles_out, angles)
            log(f"wrote {len(angles)} angles to {args.angles_out}")
    else:
        points = sampling.sample(
            sampling.SampleSpec(
                shape=shape,
                count=args.count,
                seed=args.seed,
                dim=args.n,
                ambient_dim=args.ambient,
                noise=args.noise,
            )
        )
    if args.out is None:
        for row in points:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        io.write_point_cloud_csv(args.out, points)
        log(f"wrote {points.shape[0]} x {points.shape[1]} cloud to {args.out}")
    return EXIT_OK


def cmd_distances(args) -> int:
    if args.metric == "geodesic-circle":
        d = geodesic_circle_distances(io.read_angles_csv(args.infile))
    else:
        d = euclidean_distances(io.read_point_cloud_csv(args.infile), block_size=args.block_size)
    if args.validate_triangle:
        report = validate_distance_matrix(d, check_triangle=True)
        if not report.is_valid:
            raise ValidationError(str(report))
    if args.out is None:
        for row in d:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        io.write_distance_matrix_csv(args.out, d)
        log(f"wrote {d.shape[0]} x {d.shape[0]} distance matrix to {args.out}")
    return EXIT_OK


def _sweep_from_args(args):
    source = _load_source(args)
    grid = parse_grid_spec(args.grid)
    if isinstance(grid, str):
        grid = engine.auto_grid(source)
    threads = args.threads if args.threads is not None else _default_threads()
    return engine.sweep(source, grid, block_size=args.block_size, threads=threads)


def cmd_spread(args) -> int:
    curve = _sweep_from_args(args)
    if args.out is None:
        curve.write_csv(sys.stdout)
    else:
        curve.to_csv(args.out)
        log(f"wrote {len(curve)}-point curve to {args.out}")
    if args.json_out:
        curve.to_json(args.json_out)
        log(f"wrote JSON curve to {args.json_out}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.curve is not None:
        curve = engine.SpreadCurve.from_csv(args.curve)
    else:
        if args.infile is None:
            raise ValidationError("estimate needs either --curve or --in")
        curve = _sweep_from_args(args)
    result = heuristics.estimate(curve, plateau_delta=args.plateau_delta)
    payload = result.to_dict()
    payload["grid"] = {
        "t_min": float(curve.t[0]),
        "t_max": float(curve.t[-1]),
        "count": len(curve),
    }
    text = json.dumps(payload, indent=2) + "\n"
    _emit_text(text, args.out)
    if args.out is not None:
        log(f"rounded_dimension={result.rounded_dimension} written to {args.out}")
    return EXIT_OK


def cmd_smooth(args) -> int:
    points = io.read_point_cloud_csv(args.infile)
    k = smoothing.resolve_neighbourhood_size(
        points.shape[0], k=args.k, k_percent=args.k_percent
    )
    smoothed = smoothing.knn_smooth(
        points, k, include_self=not args.exclude_self, block_size=args.block_size
    )
    if args.out is None:
        for row in smoothed:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        io.write_point_cloud_csv(args.out, smoothed)
        log(f"smoothed {points.shape[0]} points with k={k} to {args.out}")
    return EXIT_OK


def cmd_local(args) -> int:
    points = io.read_point_cloud_csv(args.infile)
    n = points.shape[0]
    if args.center_index is not None:
        center = args.center_index
    elif args.center_random:
        u = sampling.counter_uniform(args.seed, sampling.STREAM_UNIFORM, 0, 0)[0]
        center = int(u * n)
        log(f"random center index: {center}")
    else:
        raise ValidationError("local needs --center-index or --center-random")
    subset = smoothing.local_sample(points, center, args.size)
    if args.out is None:
        for row in subset:
            sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
    else:
        io.write_point_cloud_csv(args.out, subset)
        log(f"wrote {subset.shape[0]}-point local sample to {args.out}")
    return EXIT_OK


def _oracle_curve(shape: str, dim: int, grid: np.ndarray) -> engine.SpreadCurve:
    """Closed-form curve in the SpreadCurve schema; derivatives are analytic."""
    if shape == "interval":
        sigma = np.array([exact.interval_spread(t) for t in grid])
        dsigma = np.array([exact.interval_spread_derivative(t) for t in grid])
        g = grid * dsigma / sigma
    elif shape in ("circle", "sphere"):
        n = 1 if shape == "circle" else dim
        sigma = np.array([exact.sphere_spread(n, t) for t in grid])
        g = np.array([exact.sphere_growth_dimension(n, t) for t in grid])
        dsigma = g * sigma / grid
    else:
        raise ValidationError(f"unknown oracle shape {shape!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(grid > 1.0, np.log(sigma) / np.log(grid), np.nan)
    return engine.SpreadCurve(t=grid, sigma=sigma, dsigma_dt=dsigma, g_dim=g, f_dim=f)


def cmd_oracle(args) -> int:
    grid = parse_grid_spec(args.t)
    if isinstance(grid, str):
        raise ValidationError("oracle needs an explicit --t MIN:MAX:COUNT grid")
    if (grid <= 0.0).any():
        raise DomainError("oracle curves are defined for t > 0 only")
    curve = _oracle_curve(args.shape, args.n, grid)
    if args.out is None:
        curve.write_csv(sys.stdout)
    else:
        curve.to_csv(args.out)
        log(f"wrote {len(curve)}-point {args.shape} oracle curve to {args.out}")
    return EXIT_OK


def cmd_repro(args) -> int:
    """Regenerate the synthetic validation experiments into a directory."""
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    threads = args.threads if args.threads is not None else _default_threads()
    summary: dict = {"experiments": {}}

    # circle convergence: finite geodesic samples against the exact curve
    grid = engine.make_grid(0.5, 10.0, 100)
    oracle = _oracle_curve("circle", 1, grid)
    oracle.to_csv(out_dir / "circle_exact.csv")
    conv = {}
    sizes = [int(s) for s in args.circle_sizes.split(",")]
    for size in sizes:
        _, angles = sampling.sample_circle(size, seed=args.seed)
        d = geodesic_circle_distances(angles)
        curve = engine.sweep(d, grid, threads=threads)
        curve.to_csv(out_dir / f"circle_n{size}.csv")
        gap = float(np.max(np.abs(curve.g_dim - oracle.g_dim)))
        conv[str(size)] = gap
        log(f"circle n={size}: max |g_dim - exact| = {gap:.5f}")
    summary["experiments"]["circle_convergence"] = conv

    # noisy plane: smoothing pulls the growth peak back toward 1; both curves
    # are read on [0.5, 1/noise], coarse relative to the residual noise a
    # single smoothing pass cannot remove
    noise = 0.05
    raw = sampling.sample_noisy_plane(1, 2, 2000, seed=args.seed, noise=noise)
    k = smoothing.resolve_neighbourhood_size(raw.shape[0], k_percent=0.15)
    smoothed = smoothing.knn_smooth(raw, k)
    window = engine.make_grid(0.5, 1.0 / noise, 100)
    plane = {}
    for name, cloud in (("raw", raw), ("smoothed", smoothed)):
        curve = engine.sweep(euclidean_distances(cloud), window, threads=threads)
        curve.to_csv(out_dir / f"noisy_plane_{name}.csv")
        est = heuristics.estimate(curve)
        plane[name] = {"peak_g": est.peak_g, "rounded_dimension": est.rounded_dimension}
        log(f"noisy plane {name}: peak_g = {est.peak_g:.4f}")
    summary["experiments"]["noisy_plane_smoothing"] = plane

    # cube dimension table
    table = []
    for dim in (1, 2, 3):
        cloud = sampling.sample_cube(dim, args.cube_count, seed=args.seed)
        d = euclidean_distances(cloud)
        curve = engine.sweep(d, engine.auto_grid(d), threads=threads)
        est = heuristics.estimate(curve)
        table.append(
            {"dim": dim, "estimated": est.rounded_dimension, "peak_g": est.peak_g}
        )
        log(f"cube({dim}) n={args.cube_count}: estimated {est.rounded_dimension} (peak {est.peak_g:.4f})")
    summary["experiments"]["cube_dimensions"] = table
    with open(out_dir / "cube_dimensions.csv", "w", encoding="utf-8") as fp:
        fp.write("dim,estimated,peak_g\n")
        for row in table:
            fp.write(f"{row['dim']},{row['estimated']},{row['peak_g']!r}\n")

    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    log(f"summary written to {out_dir / 'summary.json'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_block_size(p) -> None:
    p.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE,
                   help="rows per block in distance evaluation")


def _add_engine_inputs(p) -> None:
    p.add_argument("--in", dest="infile", required=False, help="input CSV path")
    p.add_argument("--input-kind", choices=("cloud", "matrix"), default="cloud")
    p.add_argument("--metric", choices=("euclidean", "geodesic-circle"), default="euclidean")
    p.add_argument("--grid", default="auto", help="'auto' or MIN:MAX:COUNT[:log|linear]")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV_VAR} or CPU count)")
    _add_block_size(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spreadim",
        description="Estimate intrinsic dimension from the scale-dependent spread of a dataset.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a seeded synthetic point cloud")
    p.add_argument("--shape", required=True,
                   choices=("circle", "sphere", "cube", "noisy-plane"))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1, help="shape dimension (sphere/cube/plane)")
    p.add_argument("--ambient", type=int, default=None, help="ambient dimension for noisy-plane")
    p.add_argument("--noise", type=float, default=0.05, help="noise scale for noisy-plane")
    p.add_argument("--out", default=None)
    p.add_argument("--angles-out", default=None, help="also write circle angles")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("distances", help="build a distance matrix from a cloud or angles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--metric", choices=("euclidean", "geodesic-circle"), default="euclidean")
    p.add_argument("--validate-triangle", action="store_true",
                   help="run the O(n^3) triangle-inequality check")
    p.add_argument("--out", default=None)
    _add_block_size(p)
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("spread", help="sweep the spread curve over a scale grid")
    _add_engine_inputs(p)
    p.add_argument("--out", default=None, help="curve CSV path")
    p.add_argument("--json", dest="json_out", default=None, help="also write JSON curve")
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("estimate", help="read a dimension estimate off a curve")
    p.add_argument("--curve", default=None, help="existing curve CSV")
    _add_engine_inputs(p)
    p.add_argument("--plateau-delta", type=float, default=heuristics.DEFAULT_PLATEAU_DELTA)
    p.add_argument("--out", default=None, help="estimate JSON path")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("smooth", help="nearest-neighbour mean smoothing of a cloud")
    p.add_argument("--in", dest="infile", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, default=None)
    group.add_argument("--k-percent", type=float, default=None,
                       help="neighbourhood size as a fraction of n, e.g. 0.15")
    p.add_argument("--exclude-self", action="store_true")
    p.add_argument("--out", default=None)
    _add_block_size(p)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("local", help="extract the nearest neighbours of a centre point")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--center-index", type=int, default=None)
    p.add_argument("--center-random", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("oracle", help="closed-form curves for reference shapes")
    p.add_argument("--shape", required=True, choices=("interval", "circle", "sphere"))
    p.add_argument("--n", type=int, default=1, help="sphere dimension")
    p.add_argument("--t", required=True, help="grid spec MIN:MAX:COUNT[:log|linear]")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("repro", help="regenerate the synthetic validation experiments")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--circle-sizes", default="250,1000,4000",
                   help="comma-separated sample sizes for the circle convergence runs")
    p.add_argument("--cube-count", type=int, default=5000)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        log(f"parse error: {exc}")
        return EXIT_PARSE
    except ValidationError as exc:
        log(f"validation error: {exc}")
        return EXIT_VALIDATION
    except DomainError as exc:
        log(f"domain error: {exc}")
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        log(f"parse error: {exc}")
        return EXIT_PARSE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
