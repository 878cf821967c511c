"""Scikit-learn style wrappers around the functional core.

``SpreadDimensionEstimator`` is a fit-shaped estimator: ``fit(X)`` sweeps the
spread curve of X and exposes the dimension reading through trailing
underscore attributes. ``KnnSmoother`` is a stateless transformer usable in a
``Pipeline`` ahead of the estimator, mirroring the smooth-then-estimate
workflow for noisy data. Both inherit ``get_params``/``set_params`` from
``sklearn.base.BaseEstimator`` so they compose with model selection tools.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import engine, heuristics, smoothing
from .errors import ValidationError
from .metric import DEFAULT_BLOCK_SIZE, DistanceBlocks, euclidean_distances, require_distance_matrix

# above this many points the full matrix is not materialised; distances are
# streamed in row blocks instead
STREAMING_THRESHOLD = 8192


class SpreadDimensionEstimator(BaseEstimator):
    """Estimate the intrinsic dimension of a dataset from its spread curve.

    Parameters
    ----------
    metric : {"euclidean", "precomputed"}
        With "euclidean", X is an (n_samples, n_features) point cloud; with
        "precomputed", X is a square distance matrix.
    grid : "auto" or array-like
        Scale grid. "auto" spans [0.01, 100] divided by the median pairwise
        distance with ``grid_size`` log-spaced points.
    grid_size : int
        Number of scales in the automatic grid.
    plateau_delta : float
        Band below the peak growth value that counts as the plateau.
    block_size : int
        Row-block size for the blocked evaluation.
    n_jobs : int or None
        Worker threads for the sweep; None uses one per CPU.

    Attributes
    ----------
    dimension_ : int
        Peak growth value rounded to the nearest integer.
    peak_g_, peak_t_ : float
        The peak growth value and the scale where it occurs.
    curve_ : SpreadCurve
        The full swept curve.
    estimate_ : DimensionEstimate
        Peak, plateau and knee readings.
    """

    def __init__(
        self,
        metric: str = "euclidean",
        grid="auto",
        grid_size: int = engine.DEFAULT_GRID_SIZE,
        plateau_delta: float = heuristics.DEFAULT_PLATEAU_DELTA,
        block_size: int = DEFAULT_BLOCK_SIZE,
        n_jobs: int | None = None,
    ):
        self.metric = metric
        self.grid = grid
        self.grid_size = grid_size
        self.plateau_delta = plateau_delta
        self.block_size = block_size
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        source = self._distance_source(X)
        if isinstance(self.grid, str):
            if self.grid != "auto":
                raise ValidationError(f"grid must be 'auto' or an array, got {self.grid!r}")
            grid = engine.auto_grid(source, count=self.grid_size)
        else:
            grid = engine.validate_grid(self.grid)
        self.grid_ = grid
        self.curve_ = engine.sweep(
            source, grid, block_size=self.block_size, threads=self.n_jobs
        )
        self.estimate_ = heuristics.estimate(self.curve_, plateau_delta=self.plateau_delta)
        self.dimension_ = self.estimate_.rounded_dimension
        self.peak_g_ = self.estimate_.peak_g
        self.peak_t_ = self.estimate_.peak_t
        self.n_points_ = source.n if isinstance(source, DistanceBlocks) else X.shape[0]
        return self

    def _distance_source(self, X):
        if self.metric == "precomputed":
            return require_distance_matrix(X)
        if self.metric != "euclidean":
            raise ValidationError(
                f"metric must be 'euclidean' or 'precomputed', got {self.metric!r}"
            )
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 2 and X.shape[0] > STREAMING_THRESHOLD:
            return DistanceBlocks(X, block_size=self.block_size)
        return euclidean_distances(X, block_size=self.block_size)


class KnnSmoother(TransformerMixin, BaseEstimator):
    """Transformer applying nearest-neighbour mean smoothing to a point cloud.

    Exactly one of ``k`` (absolute) and ``k_percent`` (fraction of the number
    of points, matching the usual 15%-of-n parameterisation) is used: ``k``
    wins when both are set. The transform is stateless; ``fit`` only
    validates the input.
    """

    def __init__(
        self,
        k: int | None = None,
        k_percent: float | None = 0.15,
        include_self: bool = True,
        block_size: int = DEFAULT_BLOCK_SIZE,
    ):
        self.k = k
        self.k_percent = k_percent
        self.include_self = include_self
        self.block_size = block_size

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1] if X.ndim == 2 else 1
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        n = X.shape[0]
        if self.k is not None:
            k = smoothing.resolve_neighbourhood_size(n, k=self.k)
        else:
            k = smoothing.resolve_neighbourhood_size(n, k_percent=self.k_percent)
        return smoothing.knn_smooth(
            X, k, include_self=self.include_self, block_size=self.block_size
        )


__all__ = ["KnnSmoother", "SpreadDimensionEstimator", "STREAMING_THRESHOLD"]
