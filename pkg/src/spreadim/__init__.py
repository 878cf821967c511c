"""Intrinsic dimension estimation from the scale-dependent spread of a dataset.

The spread of a finite metric space is a one-parameter effective size,
interpolating from 1 (all points blurred together) to n (all points
resolved) as the scale factor grows. Its logarithmic growth rate reads as a
dimension at each scale, and the peak or plateau of that curve estimates the
intrinsic dimension of data lying on a low-dimensional structure.

Typical use::

    from spreadim import SpreadDimensionEstimator

    est = SpreadDimensionEstimator().fit(X)   # X: (n_samples, n_features)
    est.dimension_                            # rounded intrinsic dimension
    est.curve_                                # per-scale spread curve

or via the functional core::

    from spreadim import euclidean_distances, auto_grid, sweep, estimate

    d = euclidean_distances(X)
    curve = sweep(d, auto_grid(d))
    estimate(curve).rounded_dimension

The ``spreadim`` command line exposes the same pipeline over CSV files.
"""

from .engine import (
    SpreadCurve,
    auto_grid,
    f_dimension,
    instantaneous_dimension,
    make_grid,
    median_pairwise_distance,
    spread,
    spread_derivative,
    spread_derivative_naive,
    spread_naive,
    spread_with_derivative,
    sweep,
    validate_grid,
)
from .errors import DomainError, ParseError, SpreadimError, ValidationError
from .estimators import KnnSmoother, SpreadDimensionEstimator
from .exact import (
    circle_f_dimension,
    circle_g_dimension,
    interval_spread,
    interval_spread_derivative,
    sphere_growth_dimension,
    sphere_spread,
)
from .heuristics import DimensionEstimate, Plateau, estimate
from .metric import (
    DistanceBlocks,
    ValidationReport,
    euclidean_distances,
    geodesic_circle_distances,
    require_distance_matrix,
    validate_distance_matrix,
    validate_point_cloud,
)
from .sampling import (
    SampleSpec,
    circle_angles,
    sample,
    sample_circle,
    sample_cube,
    sample_noisy_plane,
    sample_sphere,
)
from .smoothing import knn_smooth, local_sample, resolve_neighbourhood_size

__version__ = "0.1.0"

__all__ = [
    "DimensionEstimate",
    "DistanceBlocks",
    "DomainError",
    "KnnSmoother",
    "ParseError",
    "Plateau",
    "SampleSpec",
    "SpreadCurve",
    "SpreadDimensionEstimator",
    "SpreadimError",
    "ValidationError",
    "ValidationReport",
    "auto_grid",
    "circle_angles",
    "circle_f_dimension",
    "circle_g_dimension",
    "estimate",
    "euclidean_distances",
    "f_dimension",
    "geodesic_circle_distances",
    "instantaneous_dimension",
    "interval_spread",
    "interval_spread_derivative",
    "knn_smooth",
    "local_sample",
    "make_grid",
    "median_pairwise_distance",
    "require_distance_matrix",
    "resolve_neighbourhood_size",
    "sample",
    "sample_circle",
    "sample_cube",
    "sample_noisy_plane",
    "sample_sphere",
    "sphere_growth_dimension",
    "sphere_spread",
    "spread",
    "spread_derivative",
    "spread_derivative_naive",
    "spread_naive",
    "spread_with_derivative",
    "sweep",
    "validate_distance_matrix",
    "validate_grid",
    "validate_point_cloud",
]
