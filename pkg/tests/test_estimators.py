import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from spreadim import (
    KnnSmoother,
    SpreadDimensionEstimator,
    ValidationError,
    euclidean_distances,
    knn_smooth,
    sample_circle,
    sample_cube,
    sample_noisy_plane,
)


class TestSpreadDimensionEstimator:
    def test_recovers_circle_dimension(self):
        pts, _ = sample_circle(600, seed=7)
        est = SpreadDimensionEstimator(grid_size=120).fit(pts)
        assert est.dimension_ == 1
        assert est.peak_g_ == pytest.approx(est.estimate_.peak_g)
        assert len(est.curve_) == 120
        assert est.n_points_ == 600

    def test_recovers_square_dimension(self):
        pts = sample_cube(2, 1200, seed=3)
        est = SpreadDimensionEstimator(grid_size=120, n_jobs=2).fit(pts)
        assert est.dimension_ == 2

    def test_precomputed_metric(self):
        pts = sample_cube(1, 500, seed=1)
        d = euclidean_distances(pts)
        est = SpreadDimensionEstimator(metric="precomputed", grid_size=100).fit(d)
        assert est.dimension_ == 1

    def test_precomputed_rejects_invalid_matrix(self):
        with pytest.raises(ValidationError):
            SpreadDimensionEstimator(metric="precomputed").fit(np.ones((3, 3)))

    def test_unknown_metric_rejected(self):
        with pytest.raises(ValidationError):
            SpreadDimensionEstimator(metric="cosine").fit(np.zeros((4, 2)))

    def test_explicit_grid(self):
        pts = sample_cube(1, 300, seed=5)
        grid = np.geomspace(0.5, 50.0, 60)
        est = SpreadDimensionEstimator(grid=grid).fit(pts)
        assert np.array_equal(est.grid_, grid)
        assert len(est.curve_) == 60

    def test_get_params_set_params_clone(self):
        est = SpreadDimensionEstimator(grid_size=50, plateau_delta=0.2, n_jobs=1)
        params = est.get_params()
        assert params["grid_size"] == 50
        assert params["plateau_delta"] == 0.2
        est.set_params(grid_size=75)
        assert est.grid_size == 75
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_fit_returns_self(self):
        pts = sample_cube(1, 100, seed=9)
        est = SpreadDimensionEstimator(grid_size=40)
        assert est.fit(pts) is est


class TestKnnSmoother:
    def test_transform_matches_function(self):
        pts = sample_noisy_plane(1, 2, 200, seed=2)
        out = KnnSmoother(k=10).fit_transform(pts)
        assert np.array_equal(out, knn_smooth(pts, 10))

    def test_percent_resolution(self):
        pts = sample_noisy_plane(1, 2, 200, seed=2)
        out = KnnSmoother(k_percent=0.15).fit_transform(pts)
        assert np.array_equal(out, knn_smooth(pts, 30))

    def test_k_overrides_percent(self):
        pts = sample_noisy_plane(1, 2, 100, seed=4)
        out = KnnSmoother(k=5, k_percent=0.5).fit_transform(pts)
        assert np.array_equal(out, knn_smooth(pts, 5))

    def test_exclude_self(self):
        pts = np.array([[0.0], [1.0], [10.0]])
        out = KnnSmoother(k=1, include_self=False).fit_transform(pts)
        np.testing.assert_array_equal(out.ravel(), [1.0, 0.0, 1.0])

    def test_clone(self):
        sm = KnnSmoother(k=4, include_self=False)
        assert clone(sm).get_params() == sm.get_params()


class TestPipelineComposition:
    def test_smooth_then_estimate_lowers_peak(self):
        raw = sample_noisy_plane(1, 2, 800, seed=0, noise=0.05)
        window = np.geomspace(0.5, 20.0, 80)
        direct = SpreadDimensionEstimator(grid=window).fit(raw)
        piped = Pipeline(
            [
                ("smooth", KnnSmoother(k_percent=0.15)),
                ("dim", SpreadDimensionEstimator(grid=window)),
            ]
        ).fit(raw)
        assert piped["dim"].peak_g_ < direct.peak_g_
