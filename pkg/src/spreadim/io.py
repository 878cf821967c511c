"""CSV reading and writing for point clouds and distance matrices.

Point-cloud files hold one row per point with numeric columns; an optional
header is detected by a non-numeric first row. Distance-matrix files are n
rows of n numeric columns. Floats are written with ``repr`` (shortest
round-trip form) so a write/read cycle is byte-stable.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError, ValidationError
from .metric import require_distance_matrix, validate_point_cloud


def _parse_numeric_rows(path, allow_header: bool) -> list[list[float]]:
    rows: list[list[float]] = []
    width = None
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                values = [float(p) for p in parts]
            except ValueError:
                if allow_header and lineno == 1 and not rows:
                    continue
                raise ParseError(f"line {lineno}: non-numeric value in {parts!r}") from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(
                    f"line {lineno}: expected {width} fields, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return rows


def read_point_cloud_csv(path) -> np.ndarray:
    """Load a point cloud, skipping a header row when the first row is non-numeric."""
    rows = _parse_numeric_rows(path, allow_header=True)
    return validate_point_cloud(np.asarray(rows, dtype=np.float64))


def read_distance_matrix_csv(path) -> np.ndarray:
    """Load and validate a square distance matrix (no header)."""
    rows = _parse_numeric_rows(path, allow_header=False)
    arr = np.asarray(rows, dtype=np.float64)
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(
            f"distance matrix must be square, got {arr.shape[0]} rows x {arr.shape[1]} columns"
        )
    return require_distance_matrix(arr)


def read_angles_csv(path) -> np.ndarray:
    """Load a single-column list of angles."""
    rows = _parse_numeric_rows(path, allow_header=True)
    arr = np.asarray(rows, dtype=np.float64)
    if arr.shape[1] != 1:
        raise ValidationError(f"angle file must have one column, got {arr.shape[1]}")
    return arr.reshape(-1)


def _write_rows(fp, arr: np.ndarray) -> None:
    for row in arr:
        fp.write(",".join(repr(float(v)) for v in row) + "\n")


def write_point_cloud_csv(path, points) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        _write_rows(fp, np.atleast_2d(np.asarray(points, dtype=np.float64)))


def write_distance_matrix_csv(path, matrix) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        _write_rows(fp, np.asarray(matrix, dtype=np.float64))


def write_angles_csv(path, angles) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        for v in np.asarray(angles, dtype=np.float64).reshape(-1):
            fp.write(repr(float(v)) + "\n")


__all__ = [
    "read_angles_csv",
    "read_distance_matrix_csv",
    "read_point_cloud_csv",
    "write_angles_csv",
    "write_distance_matrix_csv",
    "write_point_cloud_csv",
]
