"""Warped cusp profiles and curvature certification."""

import math
import random

import pytest

from npcchain.cusp import (
    DoublyWarpedMetric,
    WarpProfile,
    cap_profile,
    constant_profile,
    exponential_profile,
    fd_sectional_curvatures,
    interpolation_profile,
    sectional_curvatures,
    verify_nonpositive,
)


def metric(p1, p2, lo, hi):
    return DoublyWarpedMetric(p1, p2, lo, hi)


def check_derivative_consistency(prof, ts, tol=2e-5):
    """Analytic derivatives must match central differences of the values."""
    h = 1e-5
    for t in ts:
        d1 = (prof.f(t + h) - prof.f(t - h)) / (2 * h)
        d2 = (prof.f(t + h) - 2 * prof.f(t) + prof.f(t - h)) / (h * h)
        assert abs(d1 - prof.df(t)) <= tol * max(1.0, abs(prof.df(t)))
        assert abs(d2 - prof.d2f(t)) <= 2e-4 * max(1.0, abs(prof.d2f(t)))


class TestExponentialProfile:
    def test_values(self):
        e = exponential_profile()
        assert e.f(0.0) == 1.0 and e.df(0.0) == -1.0 and e.d2f(0.0) == 1.0
        assert e.f(math.log(2.0)) == 0.5

    def test_constant_minus_one_curvature(self):
        m = metric(exponential_profile(), exponential_profile(), 0.0, 10.0)
        for t in (0.0, 1.3, 5.0, 10.0):
            k13, k23, k12 = sectional_curvatures(m, t)
            assert k13 == k23 == k12 == -1.0


class TestInterpolationProfile:
    def test_target_one_is_exponential(self):
        prof = interpolation_profile(1.0, 4.0)
        for t in (0.0, 0.7, 2.5, 9.0):
            assert prof.f(t) == math.exp(-t)

    def test_tail_ratio_reaches_target(self):
        prof = interpolation_profile(2.0, 3.0)
        assert prof.f(0.5) * math.exp(0.5) == 1.0  # before the transition
        assert prof.f(20.0) * math.exp(20.0) == 2.0  # after it

    def test_exact_outside_transition(self):
        prof = interpolation_profile(2.0, 5.0, transition_start=1.0)
        assert prof.f(1.0) == math.exp(-1.0)
        assert prof.f(6.0) == 2.0 * math.exp(-6.0)

    def test_rejects_bad_target(self):
        with pytest.raises(ValueError):
            interpolation_profile(0.0, 2.0)
        with pytest.raises(ValueError):
            interpolation_profile(2.0, -1.0)

    def test_admissible_scale_nonpositive(self):
        prof = interpolation_profile(2.0, 8.0)
        m = metric(prof, prof, 0.0, 13.0)
        report = verify_nonpositive(m, 2000)
        assert report.certified
        assert report.max_curvature <= 0.0

    def test_steep_scale_detected_positive(self):
        prof = interpolation_profile(2.0, 0.05)
        m = metric(prof, prof, 0.0, 3.0)
        report = verify_nonpositive(m, 4001)
        assert not report.certified
        assert report.max_curvature > 0.0

    def test_derivatives_consistent(self):
        rng = random.Random(5)
        prof = interpolation_profile(2.0, 6.0)
        check_derivative_consistency(prof, [rng.uniform(0.2, 10.0) for _ in range(40)])


class TestCapProfile:
    def test_matches_exponential_at_cap(self):
        prof = cap_profile(0.5, 0.2)
        assert prof.f(0.5) == math.exp(-0.5)

    def test_convex_on_grid(self):
        prof = cap_profile(0.0, 0.25)
        flat_from = dict(prof.details)["flat_from_t"]
        ts = [i * (flat_from + 3.0) / 1500 for i in range(1501)]
        assert all(prof.d2f(t) >= -1e-12 for t in ts)
        assert all(prof.df(t) <= 0.0 for t in ts)

    def test_tail_exactly_flat(self):
        prof = cap_profile(0.0, 0.25)
        flat_from = dict(prof.details)["flat_from_t"]
        m = metric(prof, prof, 0.0, flat_from + 5.0)
        for t in (flat_from + 0.5, flat_from + 2.0, flat_from + 4.0):
            assert prof.f(t) == 0.25
            k13, k23, k12 = sectional_curvatures(m, t)
            assert abs(k13) <= 1e-10 and abs(k23) <= 1e-10 and abs(k12) <= 1e-10

    def test_rejects_bad_level(self):
        with pytest.raises(ValueError):
            cap_profile(0.0, 1.5)
        with pytest.raises(ValueError):
            cap_profile(0.0, 0.0)

    def test_level_near_cap_value(self):
        # flat level above exp(-t)/2 exercises the clipped transition window
        prof = cap_profile(0.0, 0.8)
        assert prof.f(0.0) == 1.0
        d = dict(prof.details)
        assert 0.0 < d["u2"] < 0.8 < d["u3"] < 1.0
        flat_from = d["flat_from_t"]
        m = metric(prof, prof, 0.0, flat_from + 2.0)
        assert verify_nonpositive(m, 1200).certified

    def test_derivatives_consistent(self):
        rng = random.Random(9)
        prof = cap_profile(0.0, 0.25)
        check_derivative_consistency(prof, [rng.uniform(0.05, 4.0) for _ in range(40)])


class TestSectionalCurvatures:
    def test_flat_product(self):
        m = metric(constant_profile(1.0), constant_profile(3.0), 0.0, 4.0)
        assert sectional_curvatures(m, 2.0) == (0.0, -0.0, -0.0)

    def test_mixed_profile(self):
        m = metric(exponential_profile(), constant_profile(1.0), 0.0, 4.0)
        k13, k23, k12 = sectional_curvatures(m, 2.0)
        assert k13 == -1.0 and k23 == 0.0 and k12 == 0.0

    def test_domain_enforced(self):
        m = metric(exponential_profile(), exponential_profile(), 0.0, 4.0)
        with pytest.raises(ValueError):
            sectional_curvatures(m, 5.0)


class TestFiniteDifferenceOracle:
    def test_hyperbolic(self):
        m = metric(exponential_profile(), exponential_profile(), 0.0, 10.0)
        for t in (1.0, 4.2, 8.0):
            for k in fd_sectional_curvatures(m, t, 1e-3):
                assert abs(k + 1.0) < 1e-5

    def test_flat(self):
        m = metric(constant_profile(2.0), constant_profile(0.5), 0.0, 4.0)
        for k in fd_sectional_curvatures(m, 2.0, 1e-3):
            assert abs(k) < 1e-10

    def test_matches_closed_forms_on_random_points(self):
        rng = random.Random(31)
        profiles = [
            (exponential_profile(), 0.2, 9.8),
            (interpolation_profile(2.0, 6.0), 0.2, 10.0),
            (interpolation_profile(0.5, 7.0), 0.2, 10.0),
            (cap_profile(0.0, 0.25), 0.2, 5.0),
        ]
        for prof, lo, hi in profiles:
            m = metric(prof, prof, lo - 0.1, hi + 0.1)
            for _ in range(100):
                t = rng.uniform(lo, hi)
                exact = sectional_curvatures(m, t)
                approx = fd_sectional_curvatures(m, t, 2e-4)
                for e, a in zip(exact, approx):
                    assert abs(e - a) <= 1e-5 * max(1.0, abs(e))

    def test_step_validation(self):
        m = metric(exponential_profile(), exponential_profile(), 0.0, 1.0)
        with pytest.raises(ValueError):
            fd_sectional_curvatures(m, 0.5, 0.3)


class TestVerifyNonpositive:
    def test_hyperbolic_report(self):
        m = metric(exponential_profile(), exponential_profile(), 0.0, 10.0)
        report = verify_nonpositive(m, 1000)
        assert report.max_curvature == -1.0
        assert report.certified

    def test_grid_validated(self):
        m = metric(exponential_profile(), exponential_profile(), 0.0, 10.0)
        with pytest.raises(ValueError):
            verify_nonpositive(m, 1)

    def test_certificate_implies_nonpositive(self, rng):
        """Whenever both profiles scan as nonincreasing and convex, every
        curvature on the grid is nonpositive up to machine zero."""
        pool = [
            exponential_profile(),
            constant_profile(0.7),
            interpolation_profile(2.0, 8.0),
            interpolation_profile(0.4, 9.0),
            cap_profile(0.0, 0.3),
            interpolation_profile(3.0, 0.08),
        ]
        tested = 0
        for _ in range(25):
            p1, p2 = rng.choice(pool), rng.choice(pool)
            lo = max(p1.t_min, p2.t_min, 0.0)
            m = metric(p1, p2, lo, lo + 14.0)
            report = verify_nonpositive(m, 700)
            if report.certified:
                assert report.max_curvature <= 1e-12
                tested += 1
        assert tested >= 5

    def test_scaling_covariance(self):
        """Stretching t by s multiplies every curvature by 1/s^2."""
        base = interpolation_profile(2.0, 5.0)
        s = 2.5
        stretched = WarpProfile(
            "stretched",
            lambda t: base.f(t / s),
            lambda t: base.df(t / s) / s,
            lambda t: base.d2f(t / s) / (s * s),
            base.t_min * s,
            base.t_max,
        )
        m1 = metric(base, base, 0.0, 12.0)
        m2 = metric(stretched, stretched, 0.0, 12.0 * s)
        for t in (0.9, 2.2, 4.8, 9.1):
            k_base = sectional_curvatures(m1, t)
            k_str = sectional_curvatures(m2, s * t)
            for a, b in zip(k_base, k_str):
                assert abs(b - a / (s * s)) < 1e-12
