"""Distance-matrix construction and validation for finite metric spaces.

A point cloud is an (n, m) float array, one row per point. A distance
matrix is an (n, n) float array with zero diagonal, exact symmetry and
nonnegative finite entries. Both are plain numpy arrays; the helpers here
validate them and build one from the other.

Construction is blocked so that memory stays O(n * block_size) even when a
full matrix would not fit: ``DistanceBlocks`` streams consecutive row
blocks of the matrix straight from the cloud, and the spread engine accepts
either form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ValidationError

DEFAULT_BLOCK_SIZE = 512

TWO_PI = 2.0 * np.pi


def validate_point_cloud(points) -> np.ndarray:
    """Coerce to a float64 (n, m) array and check the cloud invariants.

    Raises ValidationError naming the first offending row if any coordinate
    is NaN or infinite, or if the array is not a nonempty 2-d table.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValidationError(f"point cloud must be 2-d, got shape {arr.shape}")
    n, m = arr.shape
    if n < 1 or m < 1:
        raise ValidationError(f"point cloud must have n >= 1 and m >= 1, got shape {arr.shape}")
    finite_rows = np.isfinite(arr).all(axis=1)
    if not finite_rows.all():
        bad = int(np.flatnonzero(~finite_rows)[0])
        raise ValidationError(f"non-finite coordinate in point cloud at row {bad}")
    return arr


def _pairwise_rows(points: np.ndarray, start: int, stop: int) -> np.ndarray:
    """Distances from points[start:stop] to every point, by explicit differences.

    The difference-based formula keeps d(x, y) == d(y, x) bitwise, unlike the
    expanded dot-product identity, and cannot go negative under rounding.
    """
    diff = points[start:stop, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def euclidean_distances(points, block_size: int = DEFAULT_BLOCK_SIZE) -> np.ndarray:
    """Full Euclidean distance matrix of a point cloud.

    Computed in row blocks, then the strict upper triangle is mirrored so
    symmetry and the zero diagonal hold exactly, not just to rounding.
    """
    pts = validate_point_cloud(points)
    n = pts.shape[0]
    d = np.empty((n, n), dtype=np.float64)
    for start in range(0, n, block_size):
        stop = min(start + block_size, n)
        d[start:stop] = _pairwise_rows(pts, start, stop)
    upper = np.triu(d, k=1)
    return upper + upper.T


def geodesic_circle_distances(angles) -> np.ndarray:
    """Arc-length distance matrix for points on the unit circle.

    ``angles`` must lie in [0, 2*pi); the distance between two angles is the
    shorter of the two arcs joining them.
    """
    ang = np.asarray(angles, dtype=np.float64).reshape(-1)
    if ang.size < 1:
        raise ValidationError("need at least one angle")
    if not np.isfinite(ang).all():
        bad = int(np.flatnonzero(~np.isfinite(ang))[0])
        raise ValidationError(f"non-finite angle at index {bad}")
    out_of_range = (ang < 0.0) | (ang >= TWO_PI)
    if out_of_range.any():
        bad = int(np.flatnonzero(out_of_range)[0])
        raise ValidationError(
            f"angle at index {bad} is outside [0, 2*pi): {ang[bad]!r}"
        )
    gap = np.abs(ang[:, None] - ang[None, :])
    d = np.minimum(gap, TWO_PI - gap)
    np.fill_diagonal(d, 0.0)
    upper = np.triu(d, k=1)
    return upper + upper.T


@dataclass
class ValidationReport:
    """Outcome of distance-matrix validation; empty violations == valid."""

    violations: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.is_valid:
            return "valid distance matrix"
        return "; ".join(self.violations)


def validate_distance_matrix(matrix, check_triangle: bool = False) -> ValidationReport:
    """Report every violated distance-matrix invariant with offending indices.

    The triangle-inequality scan is opt-in (O(n^3)); violations beyond a
    tolerance of 1e-9 times the largest entry are reported. Never raises:
    problems are collected in the returned report.
    """
    report = ValidationReport()
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        report.violations.append(f"not a square matrix: shape {arr.shape}")
        return report
    n = arr.shape[0]

    if not np.isfinite(arr).all():
        i, j = np.argwhere(~np.isfinite(arr))[0]
        report.violations.append(f"non-finite entry at ({i}, {j})")
        return report

    diag = np.diagonal(arr)
    if (diag != 0.0).any():
        i = int(np.flatnonzero(diag != 0.0)[0])
        report.violations.append(f"nonzero diagonal at ({i}, {i}): {diag[i]!r}")

    asym = arr != arr.T
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        report.violations.append(f"symmetry violation at ({i}, {j}): {arr[i, j]!r} != {arr[j, i]!r}")

    neg = arr < 0.0
    if neg.any():
        i, j = map(int, np.argwhere(neg)[0])
        report.violations.append(f"negative entry at ({i}, {j}): {arr[i, j]!r}")

    if check_triangle and report.is_valid:
        tol = 1e-9 * float(arr.max()) if n > 0 else 0.0
        for k in range(n):
            slack = arr - (arr[:, k : k + 1] + arr[k : k + 1, :])
            worst = np.argwhere(slack > tol)
            if worst.size:
                i, j = map(int, worst[0])
                report.violations.append(
                    f"triangle violation at ({i}, {k}, {j}): "
                    f"d[{i},{j}]={arr[i, j]!r} > d[{i},{k}]+d[{k},{j}]={arr[i, k] + arr[k, j]!r}"
                )
                break
    return report


def require_distance_matrix(matrix, check_triangle: bool = False) -> np.ndarray:
    """Validate and return the matrix as float64, raising on any violation."""
    arr = np.asarray(matrix, dtype=np.float64)
    report = validate_distance_matrix(arr, check_triangle=check_triangle)
    if not report.is_valid:
        raise ValidationError(str(report))
    return arr


class DistanceBlocks:
    """Streams consecutive row blocks of a Euclidean distance matrix.

    Wraps a point cloud instead of materialising the (n, n) matrix; each
    iteration yields ``(start, block)`` where ``block`` holds rows
    ``start:start+len(block)``. Re-iterable, so multi-pass consumers (grid
    calibration followed by a sweep) can share one instance.
    """

    def __init__(self, points, block_size: int = DEFAULT_BLOCK_SIZE):
        if block_size < 1:
            raise ValidationError(f"block_size must be >= 1, got {block_size}")
        self.points = validate_point_cloud(points)
        self.block_size = int(block_size)
        self.n = self.points.shape[0]

    def blocks(self) -> Iterator[tuple[int, np.ndarray]]:
        for start in range(0, self.n, self.block_size):
            stop = min(start + self.block_size, self.n)
            yield start, _pairwise_rows(self.points, start, stop)
