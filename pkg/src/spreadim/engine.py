"""Scaled spread, its growth rate, and dimension curves of finite metric spaces.

For a finite metric space with distance matrix d and a scale factor t >= 0,
the spread is

    sigma(t) = sum_x 1 / sum_y exp(-t * d(x, y))

with derivative

    sigma'(t) = sum_x [ sum_y d(x, y) exp(-t * d(x, y)) ] / [ sum_z exp(-t * d(x, z)) ]^2

Both are evaluated here blockwise over rows of the matrix, so memory stays
O(n * block_size); a symmetric in-memory matrix additionally gets a
triangle-blocked pass that computes each exponential once and reuses it for
the mirrored entry. ``spread_naive`` and ``spread_derivative_naive`` are
deliberately plain double loops kept as independent references for the
vectorised path.

Two dimension readings derive from the spread:

    g_dim(t) = t * sigma'(t) / sigma(t)        defined as 0 at t = 0
    f_dim(t) = ln(sigma(t)) / ln(t)            only for t > 1

Determinism contract: for a fixed block size, results are bit-identical
across runs and thread counts. Each scale is reduced independently with a
fixed block order and numpy's fixed-shape pairwise sums, so parallelising a
sweep across scales cannot reorder any floating-point reduction.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .errors import DomainError, ParseError, ValidationError
from .metric import DEFAULT_BLOCK_SIZE, DistanceBlocks

DistanceSource = Union[np.ndarray, DistanceBlocks]

DEFAULT_GRID_SIZE = 200
AUTO_SPAN_LOW = 0.01
AUTO_SPAN_HIGH = 100.0
MEDIAN_SAMPLE_ROWS = 1024

CURVE_CSV_HEADER = "t,sigma,dsigma_dt,g_dim,f_dim"


# ---------------------------------------------------------------------------
# scale grids


def validate_grid(scales) -> np.ndarray:
    """Check a scale grid: finite, nonnegative, strictly increasing."""
    grid = np.asarray(scales, dtype=np.float64).reshape(-1)
    if grid.size < 1:
        raise ValidationError("scale grid must contain at least one value")
    if not np.isfinite(grid).all():
        raise ValidationError("scale grid contains non-finite values")
    if (grid < 0.0).any():
        bad = float(grid[grid < 0.0][0])
        raise ValidationError(f"scale grid contains negative value {bad!r}")
    if grid.size > 1 and not (np.diff(grid) > 0.0).all():
        raise ValidationError("scale grid must be strictly increasing")
    return grid


def make_grid(t_min: float, t_max: float, count: int, spacing: str = "log") -> np.ndarray:
    """Build a grid of ``count`` scales from t_min to t_max."""
    if count < 1:
        raise ValidationError(f"grid count must be >= 1, got {count}")
    if spacing not in ("log", "linear"):
        raise ValidationError(f"spacing must be 'log' or 'linear', got {spacing!r}")
    if count == 1:
        if t_max != t_min:
            raise ValidationError("a single-point grid needs t_min == t_max")
        return validate_grid([t_min])
    if not (t_min < t_max):
        raise ValidationError(f"need t_min < t_max, got {t_min!r} >= {t_max!r}")
    if spacing == "log":
        if t_min <= 0.0:
            raise ValidationError("log spacing needs t_min > 0")
        grid = np.geomspace(t_min, t_max, count)
    else:
        grid = np.linspace(t_min, t_max, count)
    # geomspace/linspace guarantee exact endpoints; enforce strict monotonicity
    return validate_grid(grid)


def median_pairwise_distance(source: DistanceSource) -> float:
    """Median off-diagonal distance, the data scale the auto grid adapts to.

    Exact for small matrices; for large inputs the median is taken over an
    evenly strided subset of rows (at most 1024), which is deterministic and
    close enough for picking a scale window.
    """
    if isinstance(source, DistanceBlocks):
        n = source.n
        rows = _strided_rows(n)
        from .metric import _pairwise_rows

        values = []
        for i in rows:
            row = _pairwise_rows(source.points, i, i + 1)[0]
            values.append(np.delete(row, i))
        stacked = np.concatenate(values) if values else np.array([])
        return float(np.median(stacked)) if stacked.size else 0.0

    d = _as_matrix(source)
    n = d.shape[0]
    if n == 1:
        return 0.0
    if n <= 2048:
        iu = np.triu_indices(n, k=1)
        return float(np.median(d[iu]))
    rows = _strided_rows(n)
    values = [np.delete(d[i], i) for i in rows]
    return float(np.median(np.concatenate(values)))


def _strided_rows(n: int) -> np.ndarray:
    k = min(n, MEDIAN_SAMPLE_ROWS)
    return np.unique(np.linspace(0, n - 1, num=k).astype(int))


def auto_grid(source: DistanceSource, count: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Log-spaced grid spanning [0.01, 100] / median(distance).

    The informative window of the growth curve sits at scales inverse to
    typical distances, so the span tracks the data; a degenerate space (all
    points coincident) falls back to median 1.
    """
    med = median_pairwise_distance(source)
    if not (med > 0.0):
        med = 1.0
    return make_grid(AUTO_SPAN_LOW / med, AUTO_SPAN_HIGH / med, count, spacing="log")


# ---------------------------------------------------------------------------
# reference implementations (kept independent of the vectorised path)


def spread_naive(matrix, t: float) -> float:
    """Spread by the direct double loop; the reference the fast path is tested against."""
    _check_scale(t)
    d = _as_matrix(matrix)
    exp = math.exp
    total = 0.0
    for row in d.tolist():
        denom = 0.0
        for v in row:
            denom += exp(-t * v)
        total += 1.0 / denom
    return total


def spread_derivative_naive(matrix, t: float) -> float:
    """Spread derivative by the direct double loop; reference implementation."""
    _check_scale(t)
    d = _as_matrix(matrix)
    exp = math.exp
    total = 0.0
    for row in d.tolist():
        num = 0.0
        denom = 0.0
        for v in row:
            e = exp(-t * v)
            num += v * e
            denom += e
        total += num / (denom * denom)
    return total


# ---------------------------------------------------------------------------
# vectorised blocked evaluation


def _check_scale(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"scale factor must be finite and >= 0, got {t!r}")
    return t


def _as_matrix(matrix) -> np.ndarray:
    d = np.asarray(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError(f"distance matrix must be square, got shape {d.shape}")
    return d


def _row_sums_matrix(
    d: np.ndarray, t: float, block_size: int, want_derivative: bool
) -> tuple[np.ndarray, np.ndarray | None]:
    """Row sums of exp(-t d) and, optionally, of d * exp(-t d).

    Walks the upper triangle in row blocks and mirrors each rectangle into
    the transposed rows, so every off-diagonal exponential is evaluated once.
    Block order and reductions are fixed, making the result deterministic.
    """
    n = d.shape[0]
    sum_e = np.zeros(n, dtype=np.float64)
    sum_de = np.zeros(n, dtype=np.float64) if want_derivative else None
    for i0 in range(0, n, block_size):
        i1 = min(i0 + block_size, n)
        square = d[i0:i1, i0:i1]
        e_sq = np.exp(-t * square)
        sum_e[i0:i1] += e_sq.sum(axis=1)
        if want_derivative:
            sum_de[i0:i1] += (square * e_sq).sum(axis=1)
        if i1 < n:
            rect = d[i0:i1, i1:]
            e_rect = np.exp(-t * rect)
            sum_e[i0:i1] += e_rect.sum(axis=1)
            sum_e[i1:] += e_rect.sum(axis=0)
            if want_derivative:
                de_rect = rect * e_rect
                sum_de[i0:i1] += de_rect.sum(axis=1)
                sum_de[i1:] += de_rect.sum(axis=0)
    return sum_e, sum_de


def _row_sums_blocks(
    source: DistanceBlocks, ts: np.ndarray, want_derivative: bool
) -> tuple[np.ndarray, np.ndarray | None]:
    """Row sums for every scale in one streaming pass over the row blocks.

    Shapes (len(ts), n); distances for each block are computed once and
    reused across all scales.
    """
    n = source.n
    sum_e = np.empty((len(ts), n), dtype=np.float64)
    sum_de = np.empty((len(ts), n), dtype=np.float64) if want_derivative else None
    for start, block in source.blocks():
        stop = start + block.shape[0]
        for k, t in enumerate(ts):
            e = np.exp(-t * block)
            sum_e[k, start:stop] = e.sum(axis=1)
            if want_derivative:
                sum_de[k, start:stop] = (block * e).sum(axis=1)
    return sum_e, sum_de


def _reduce(sum_e: np.ndarray, sum_de: np.ndarray | None) -> tuple[float, float | None]:
    sigma = float((1.0 / sum_e).sum())
    if sum_de is None:
        return sigma, None
    dsigma = float((sum_de / (sum_e * sum_e)).sum())
    return sigma, dsigma


def spread(source: DistanceSource, t: float, block_size: int = DEFAULT_BLOCK_SIZE) -> float:
    """Vectorised spread at a single scale; agrees with ``spread_naive`` to rounding."""
    t = _check_scale(t)
    if t == 0.0:
        return 1.0
    if isinstance(source, DistanceBlocks):
        sum_e, _ = _row_sums_blocks(source, np.array([t]), want_derivative=False)
        return _reduce(sum_e[0], None)[0]
    sum_e, _ = _row_sums_matrix(_as_matrix(source), t, block_size, want_derivative=False)
    return _reduce(sum_e, None)[0]


def spread_derivative(
    source: DistanceSource, t: float, block_size: int = DEFAULT_BLOCK_SIZE
) -> float:
    """d(spread)/dt at a single scale; nonnegative term by term."""
    _, dsigma = spread_with_derivative(source, t, block_size=block_size)
    return dsigma


def spread_with_derivative(
    source: DistanceSource, t: float, block_size: int = DEFAULT_BLOCK_SIZE
) -> tuple[float, float]:
    """Spread and its derivative sharing one blocked pass over the distances."""
    t = _check_scale(t)
    if isinstance(source, DistanceBlocks):
        sum_e, sum_de = _row_sums_blocks(source, np.array([t]), want_derivative=True)
        sigma, dsigma = _reduce(sum_e[0], sum_de[0])
    else:
        sum_e, sum_de = _row_sums_matrix(
            _as_matrix(source), t, block_size, want_derivative=True
        )
        sigma, dsigma = _reduce(sum_e, sum_de)
    if t == 0.0:
        sigma = 1.0
    return sigma, dsigma


def instantaneous_dimension(
    source: DistanceSource, t: float, block_size: int = DEFAULT_BLOCK_SIZE
) -> float:
    """Growth rate t * sigma'(t) / sigma(t); 0 at t = 0 by the limit."""
    t = _check_scale(t)
    if t == 0.0:
        return 0.0
    sigma, dsigma = spread_with_derivative(source, t, block_size=block_size)
    return t * dsigma / sigma


def f_dimension(
    source: DistanceSource, t: float, block_size: int = DEFAULT_BLOCK_SIZE
) -> float:
    """ln(sigma(t)) / ln(t); requires t > 1, where the log ratio is meaningful."""
    t = float(t)
    if not (t > 1.0):
        raise DomainError(
            f"f_dimension requires t > 1 (ln t vanishes at t = 1 and is negative below); got {t!r}"
        )
    return math.log(spread(source, t, block_size=block_size)) / math.log(t)


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class SpreadCurve:
    """Per-scale record of spread, its derivative and both dimension readings.

    ``f_dim`` is NaN wherever t <= 1. ``n`` is the point count of the source
    space when known (it is not part of the CSV schema).
    """

    t: np.ndarray
    sigma: np.ndarray
    dsigma_dt: np.ndarray
    g_dim: np.ndarray
    f_dim: np.ndarray
    n: int | None = None

    def __len__(self) -> int:
        return self.t.size

    def write_csv(self, fp: IO[str]) -> None:
        fp.write(CURVE_CSV_HEADER + "\n")
        for i in range(len(self)):
            f = "" if math.isnan(self.f_dim[i]) else repr(float(self.f_dim[i]))
            fp.write(
                f"{float(self.t[i])!r},{float(self.sigma[i])!r},"
                f"{float(self.dsigma_dt[i])!r},{float(self.g_dim[i])!r},{f}\n"
            )

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            self.write_csv(fp)

    @classmethod
    def read_csv(cls, fp: IO[str]) -> "SpreadCurve":
        header = fp.readline().strip()
        if header != CURVE_CSV_HEADER:
            raise ParseError(
                f"line 1: expected curve header {CURVE_CSV_HEADER!r}, got {header!r}"
            )
        cols: list[list[float]] = [[], [], [], [], []]
        for lineno, line in enumerate(fp, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ParseError(f"line {lineno}: expected 5 fields, got {len(parts)}")
            try:
                for j, part in enumerate(parts):
                    if j == 4 and part == "":
                        cols[4].append(math.nan)
                    else:
                        cols[j].append(float(part))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        if not cols[0]:
            raise ParseError("curve file contains no data rows")
        arrays = [np.asarray(c, dtype=np.float64) for c in cols]
        return cls(*arrays)

    @classmethod
    def from_csv(cls, path) -> "SpreadCurve":
        with open(path, "r", encoding="utf-8") as fp:
            return cls.read_csv(fp)

    def to_records(self) -> list[dict]:
        records = []
        for i in range(len(self)):
            records.append(
                {
                    "t": float(self.t[i]),
                    "sigma": float(self.sigma[i]),
                    "dsigma_dt": float(self.dsigma_dt[i]),
                    "g_dim": float(self.g_dim[i]),
                    "f_dim": None if math.isnan(self.f_dim[i]) else float(self.f_dim[i]),
                }
            )
        return records

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_records(), indent=2)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fp:
                fp.write(text + "\n")
        return text


def _curve_from_sums(
    grid: np.ndarray, sigmas: np.ndarray, dsigmas: np.ndarray, n: int | None
) -> SpreadCurve:
    g_dim = np.where(grid > 0.0, grid * dsigmas / sigmas, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        f_dim = np.where(grid > 1.0, np.log(sigmas) / np.log(grid), np.nan)
    return SpreadCurve(
        t=grid, sigma=sigmas, dsigma_dt=dsigmas, g_dim=g_dim, f_dim=f_dim, n=n
    )


def sweep(
    source: DistanceSource,
    grid,
    block_size: int = DEFAULT_BLOCK_SIZE,
    threads: int | None = None,
) -> SpreadCurve:
    """Evaluate the full curve over a scale grid.

    An in-memory matrix is swept one scale at a time (optionally in parallel
    across scales; ``threads=None`` uses one worker per CPU); a streaming
    ``DistanceBlocks`` source is swept in a single pass over the blocks so
    distances are computed only once.
    """
    grid = validate_grid(grid)
    n: int | None

    if isinstance(source, DistanceBlocks):
        n = source.n
        sum_e, sum_de = _row_sums_blocks(source, grid, want_derivative=True)
        pairs = [_reduce(sum_e[k], sum_de[k]) for k in range(len(grid))]
    else:
        d = _as_matrix(source)
        n = d.shape[0]

        def one_scale(t: float) -> tuple[float, float]:
            sum_e, sum_de = _row_sums_matrix(d, t, block_size, want_derivative=True)
            return _reduce(sum_e, sum_de)

        workers = _resolve_threads(threads, len(grid))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                pairs = list(pool.map(one_scale, grid))
        else:
            pairs = [one_scale(t) for t in grid]

    sigmas = np.array([p[0] for p in pairs], dtype=np.float64)
    dsigmas = np.array([p[1] for p in pairs], dtype=np.float64)
    sigmas[grid == 0.0] = 1.0
    return _curve_from_sums(grid, sigmas, dsigmas, n)


def _resolve_threads(threads: int | None, n_tasks: int) -> int:
    if threads is None:
        import os

        threads = os.cpu_count() or 1
    if threads < 1:
        raise ValidationError(f"thread count must be >= 1, got {threads}")
    return min(int(threads), n_tasks)


__all__ = [
    "SpreadCurve",
    "auto_grid",
    "f_dimension",
    "instantaneous_dimension",
    "make_grid",
    "median_pairwise_distance",
    "spread",
    "spread_derivative",
    "spread_derivative_naive",
    "spread_naive",
    "spread_with_derivative",
    "sweep",
    "validate_grid",
]
