"""Nearest-neighbour smoothing and local sample extraction for point clouds.

Smoothing replaces each point by the coordinate-wise mean of its k nearest
neighbours under Euclidean distance, collapsing noise transverse to the
structure the points lie near. Neighbour search is exact brute force,
evaluated in row blocks like the distance engine; ties at the k-th distance
are broken by ascending original index so results are deterministic.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .metric import DEFAULT_BLOCK_SIZE, _pairwise_rows, validate_point_cloud


def resolve_neighbourhood_size(n: int, k: int | None = None, k_percent: float | None = None) -> int:
    """Turn an absolute k or a fraction of n into a concrete k (at least 1)."""
    if (k is None) == (k_percent is None):
        raise ValidationError("specify exactly one of k or k_percent")
    if k is not None:
        return int(k)
    if not 0.0 < k_percent <= 1.0:
        raise ValidationError(f"k_percent must be in (0, 1], got {k_percent!r}")
    return max(1, round(k_percent * n))


def _k_smallest(row: np.ndarray, k: int, skip: int | None = None) -> np.ndarray:
    """Indices of the k smallest entries, ties resolved by ascending index."""
    if skip is not None:
        row = row.copy()
        row[skip] = np.inf
    kth = np.partition(row, k - 1)[k - 1]
    chosen = np.flatnonzero(row < kth)
    at_kth = np.flatnonzero(row == kth)
    sel = np.concatenate([chosen, at_kth[: k - chosen.size]])
    sel.sort()
    return sel


def knn_smooth(
    points,
    k: int,
    include_self: bool = True,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> np.ndarray:
    """Replace each point by the mean of its k nearest neighbours.

    With ``include_self`` (the default) a point is its own zero-distance
    neighbour, so k = 1 returns the input unchanged and k = n maps every
    point to the centroid. With ``include_self=False`` the point itself is
    excluded from its neighbour set and k may be at most n - 1.
    """
    pts = validate_point_cloud(points)
    n = pts.shape[0]
    k_max = n if include_self else n - 1
    if not 1 <= k <= k_max:
        raise ValidationError(
            f"k must be in [1, {k_max}] for {n} points"
            f"{'' if include_self else ' excluding self'}, got {k}"
        )
    out = np.empty_like(pts)
    for start in range(0, n, block_size):
        stop = min(start + block_size, n)
        dist_block = _pairwise_rows(pts, start, stop)
        for offset in range(stop - start):
            i = start + offset
            sel = _k_smallest(dist_block[offset], k, skip=None if include_self else i)
            out[i] = pts[sel].mean(axis=0)
    return out


def local_sample(points, center_index: int, size: int) -> np.ndarray:
    """The ``size`` points nearest to the centre point, ordered by distance.

    The centre itself (distance zero) comes first; original coordinates are
    preserved. Distance ties are broken by ascending original index.
    """
    pts = validate_point_cloud(points)
    n = pts.shape[0]
    if not 0 <= center_index < n:
        raise ValidationError(f"center_index must be in [0, {n - 1}], got {center_index}")
    if not 1 <= size <= n:
        raise ValidationError(f"size must be in [1, {n}], got {size}")
    dist = _pairwise_rows(pts, center_index, center_index + 1)[0]
    order = np.lexsort((np.arange(n), dist))
    return pts[order[:size]]


__all__ = ["knn_smooth", "local_sample", "resolve_neighbourhood_size"]
