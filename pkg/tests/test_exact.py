import math

import numpy as np
import pytest

from spreadim import (
    DomainError,
    circle_f_dimension,
    circle_g_dimension,
    f_dimension,
    geodesic_circle_distances,
    instantaneous_dimension,
    interval_spread,
    interval_spread_derivative,
    spread,
    spread_naive,
    sphere_growth_dimension,
    sphere_spread,
)


def even_circle_angles(n):
    return np.arange(n) * 2.0 * np.pi / n


class TestIntervalSpread:
    def test_limit_at_zero(self):
        assert interval_spread(1e-13) == 1.0
        assert interval_spread(1e-6) == pytest.approx(1.0, abs=1e-6)

    def test_asymptote_at_ten(self):
        assert interval_spread(10.0) == pytest.approx(10.0 / 2 + math.log(2), abs=1e-3)

    @pytest.mark.parametrize("t", [30.0, 50.0, 100.0, 500.0])
    def test_asymptote_tight_for_large_t(self, t):
        assert abs(interval_spread(t) - (t / 2 + math.log(2))) <= 1e-6

    def test_matches_textbook_form_in_safe_range(self):
        # the arctanh form itself loses digits as x -> 1, so the tight
        # comparison stops where it is still well conditioned
        for t in (0.3, 1.0, 5.0):
            x = math.sqrt(1.0 - math.exp(-t))
            direct = math.atanh(x) / x
            assert interval_spread(t) == pytest.approx(direct, rel=1e-13)
        x = math.sqrt(1.0 - math.exp(-20.0))
        assert interval_spread(20.0) == pytest.approx(math.atanh(x) / x, rel=1e-8)

    def test_matches_fine_finite_sample(self):
        pts = np.linspace(0.0, 1.0, 2000)
        d = np.abs(pts[:, None] - pts[None, :])
        assert spread_naive(d, 1.0) == pytest.approx(interval_spread(1.0), abs=1e-3)

    def test_domain(self):
        for bad in (0.0, -1.0, math.inf):
            with pytest.raises(DomainError):
                interval_spread(bad)

    def test_derivative_against_central_differences(self):
        for t in (0.2, 1.0, 4.0, 25.0):
            h = 1e-6 * t
            fd = (interval_spread(t + h) - interval_spread(t - h)) / (2 * h)
            assert interval_spread_derivative(t) == pytest.approx(fd, rel=1e-7)

    def test_derivative_limits(self):
        assert interval_spread_derivative(1e-10) == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert interval_spread_derivative(200.0) == pytest.approx(0.5, abs=1e-12)


class TestSphereSpread:
    def test_circle_case_limit_at_zero(self):
        assert sphere_spread(1, 1e-8) == pytest.approx(1.0, abs=1e-6)

    def test_two_sphere_at_one(self):
        expected = 4.0 / (1.0 + math.exp(-math.pi))  # 3.8343046713345483
        assert sphere_spread(2, 1.0) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_limit_one_at_small_scale(self, n):
        assert sphere_spread(n, 1e-8) == pytest.approx(1.0, abs=1e-6)

    def test_circle_matches_even_thousand_point_sample(self):
        d = geodesic_circle_distances(even_circle_angles(1000))
        assert abs(spread(d, 5.0) - sphere_spread(1, 5.0)) <= 0.01

    def test_log_product_path_continuous(self):
        # n = 21 crosses the log-space threshold; check against the direct product
        t = 2.5
        base = math.pi * t / -math.expm1(-math.pi * t)
        direct = base
        for i in range(1, 11):
            direct *= (t / (2 * i)) ** 2 + 1.0
        assert sphere_spread(21, t) == pytest.approx(direct, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            sphere_spread(0, 1.0)
        with pytest.raises(DomainError):
            sphere_spread(-2, 1.0)
        with pytest.raises(DomainError):
            sphere_spread(2, 0.0)
        with pytest.raises(DomainError):
            sphere_spread(2.0, 1.0)  # non-integer dimension


class TestCircleFormulas:
    def test_growth_limit_at_zero(self):
        assert circle_g_dimension(1e-12) == pytest.approx(0.0, abs=1e-6)

    def test_growth_near_one_at_ten(self):
        assert abs(circle_g_dimension(10.0) - 1.0) <= 1e-12

    def test_growth_value_at_one(self):
        assert circle_g_dimension(1.0) == pytest.approx(
            1.0 - math.pi / (math.exp(math.pi) - 1.0), rel=1e-14
        )

    def test_growth_monotone_increasing(self):
        # strictly increasing until the curve saturates at 1.0 in doubles
        ts = np.geomspace(0.01, 10.0, 40)
        vals = [circle_g_dimension(t) for t in ts]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        tail = [circle_g_dimension(t) for t in (10.0, 20.0, 50.0)]
        assert all(b >= a for a, b in zip(tail, tail[1:]))

    def test_growth_against_finite_sample(self):
        d = geodesic_circle_distances(even_circle_angles(2000))
        assert abs(instantaneous_dimension(d, 1.0) - circle_g_dimension(1.0)) <= 0.01

    def test_f_value_at_e(self):
        expected = 1.0 + math.log(math.pi) - math.log(-math.expm1(-math.e * math.pi))
        assert circle_f_dimension(math.e) == pytest.approx(expected, rel=1e-14)

    def test_f_decreases_toward_one(self):
        ts = [2.0, 5.0, 20.0, 1e3, 1e9, 1e300]
        vals = [circle_f_dimension(t) for t in ts]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.0, abs=2e-3)

    def test_f_against_finite_sample(self):
        d = geodesic_circle_distances(even_circle_angles(2000))
        assert abs(f_dimension(d, 5.0) - circle_f_dimension(5.0)) <= 0.05

    def test_domains(self):
        for bad in (0.5, 1.0, 0.0, -3.0):
            with pytest.raises(DomainError):
                circle_f_dimension(bad)
        with pytest.raises(DomainError):
            circle_g_dimension(0.0)


class TestInternalConsistency:
    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_growth_matches_finite_differences_of_spread(self, n):
        for t in np.geomspace(0.5, 10.0, 7):
            h = 1e-6 * t
            fd = (sphere_spread(n, t + h) - sphere_spread(n, t - h)) / (2 * h)
            g_fd = t * fd / sphere_spread(n, t)
            assert abs(sphere_growth_dimension(n, t) - g_fd) <= 1e-8

    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_f_identity_from_spread(self, n):
        for t in (1.5, 3.0, 8.0):
            f = math.log(sphere_spread(n, t)) / math.log(t)
            if n == 1:
                assert abs(circle_f_dimension(t) - f) <= 1e-12

    def test_circle_pair_derivable_from_sphere(self):
        for t in (0.7, 2.0, 9.0):
            assert circle_g_dimension(t) == pytest.approx(
                sphere_growth_dimension(1, t), rel=1e-13
            )

    def test_growth_approaches_dimension(self):
        for n in (1, 2, 3, 5):
            assert sphere_growth_dimension(n, 2000.0) == pytest.approx(n, abs=1e-2)
