"""Warped metrics: curvature certification, comparison, bound verification."""

import math

import numpy as np
import pytest

from sphericity import (CurveGenerationError,
                        HypothesisViolation, make_warped, make_warped_curve,
                        circle_normal_curvature,
                        verify_circle_curvature_comparison,
                        verify_radial_bounds)
from sphericity.warped import comparison_space, warped_curve_kappa_analytic


class TestMakeWarped:
    def test_flat_family(self):
        m = make_warped("flat", T=2.0)
        assert m.k_lo == m.k_hi == 0.0
        assert abs(circle_normal_curvature(m, 0.5) - 2.0) < 1e-14

    def test_constant_curvature_families(self):
        m = make_warped("hyperbolic", T=2.0, k1=1.0)
        assert abs(m.k_lo + 1.0) < 1e-10 and abs(m.k_hi + 1.0) < 1e-10
        assert abs(circle_normal_curvature(m, 1.3) - 1.0 / math.tanh(1.3)) \
            < 1e-14
        m2 = make_warped("spherical", T=1.4, k1=1.0)
        assert abs(m2.k_lo - 1.0) < 1e-10 and abs(m2.k_hi - 1.0) < 1e-10

    def test_cubic_band_measured_vs_analytic(self):
        eps = 0.05
        m = make_warped("cubic", T=2.0, eps=eps)
        assert abs(m.k_lo + 6 * eps) < 1e-9
        assert m.k_hi < 0.0
        t = np.linspace(0.01, 2.0, 500)
        analytic = -6 * eps / (1 + eps * t * t)
        # finite-difference curvature against the analytic value
        h = 1e-4
        fd = -(m.f(t + h) - 2 * m.f(t) + m.f(t - h)) / (h * h * m.f(t))
        assert float(np.max(np.abs(fd - analytic))) < 1e-7
        assert float(np.max(np.abs(m.curvature(t) - analytic))) < 1e-13

    def test_cubic_mu_value(self):
        m = make_warped("cubic", T=2.0, eps=0.05)
        t = 1.0
        expected = (1 + 0.15) / (1 + 0.05)
        assert abs(circle_normal_curvature(m, t) - expected) < 1e-14
        # dominated by the hyperbolic comparison circle curvature
        k1 = math.sqrt(0.3)
        assert circle_normal_curvature(m, t) <= k1 / math.tanh(k1 * t)

    def test_perturbed_sin_band_starts_at_one(self):
        m = make_warped("perturbed_sin", T=1.5, delta=0.01)
        assert m.k_lo >= 1.0 - 1e-9
        assert m.k_hi <= (1 + 0.01) / (1 - 0.06) * (1 + 0.03) + 1e-9

    def test_band_violation_rejected(self):
        with pytest.raises(CurveGenerationError):
            make_warped("perturbed_sin", T=1.5, delta=0.2)

    def test_warp_positivity_enforced(self):
        with pytest.raises(CurveGenerationError) as err:
            make_warped("spherical", T=3.5, k1=1.0)   # sin vanishes at pi
        assert err.value.where is not None

    def test_bump_family_certified(self):
        m = make_warped("sinh_bump", T=2.0, k1=1.0, amp=0.02, center=1.0,
                        width=0.5)
        assert m.k_hi <= 1e-9
        assert m.k_lo >= -4.0


class TestMuComparison:
    def test_constant_warps_attain_equality(self):
        for fam, params, T in (("hyperbolic", {"k1": 1.0}, 2.0),
                               ("spherical", {"k1": 1.0}, 1.4),
                               ("flat", {}, 2.0)):
            rep = verify_circle_curvature_comparison(
                make_warped(fam, T=T, **params))
            assert rep.passed
            assert float(np.max(np.abs(rep.slack))) < 1e-10

    def test_cubic_dominated(self):
        rep = verify_circle_curvature_comparison(
            make_warped("cubic", T=2.0, eps=0.05))
        assert rep.comparison == "hyperbolic"
        assert abs(rep.k1_used - math.sqrt(0.3)) < 1e-6
        assert rep.min_slack >= -1e-9

    def test_perturbed_sin_dominated(self):
        rep = verify_circle_curvature_comparison(
            make_warped("perturbed_sin", T=1.5, delta=0.01))
        assert rep.comparison == "sphere"
        assert rep.min_slack >= -1e-9

    def test_mixed_band_has_no_comparison(self):
        m = make_warped("cubic", T=2.0, eps=0.05)
        mixed = type(m)(family=m.family, params=m.params, T=m.T, f=m.f,
                        fp=m.fp, fpp=m.fpp, k_lo=-0.1, k_hi=0.1)
        with pytest.raises(HypothesisViolation):
            comparison_space(mixed)


class TestWarpedCurves:
    def test_coordinate_circle_angles_vanish(self):
        m = make_warped("cubic", T=2.0, eps=0.05)
        curve = make_warped_curve(m, 0.9, {})
        ver = verify_radial_bounds(m, curve)
        assert ver.passed
        assert abs(ver.d) < 1e-12
        assert abs(ver.min_angle_slack
                   - (1.0 - ver.bound_cos)) < 1e-12

    def test_kappa_fd_matches_analytic(self):
        m = make_warped("cubic", T=2.0, eps=0.05)
        harmonics = {2: (0.05, 0.0), 3: (0.0, 0.02)}
        curve = make_warped_curve(m, 0.8, harmonics)
        oracle = warped_curve_kappa_analytic(m, 0.8, harmonics, curve.theta)
        assert float(np.max(np.abs(curve.kappa - oracle))) < 2e-6

    def test_circle_kappa_equals_mu(self):
        m = make_warped("perturbed_sin", T=1.5, delta=0.01)
        curve = make_warped_curve(m, 0.7, {})
        assert abs(curve.kmin - circle_normal_curvature(m, 0.7)) < 1e-9

    def test_rho_domain_enforced(self):
        m = make_warped("cubic", T=2.0, eps=0.05)
        with pytest.raises(CurveGenerationError):
            make_warped_curve(m, 1.9, {2: (0.3, 0.0)})

    @pytest.mark.parametrize("family,params,T,rho0", [
        ("cubic", {"eps": 0.05}, 2.0, 0.8),
        ("perturbed_sin", {"delta": 0.01}, 1.5, 0.7),
    ])
    def test_seeded_curves_pass_bounds(self, family, params, T, rho0):
        metric = make_warped(family, T=T, **params)
        rng = np.random.default_rng(99)
        for _ in range(20):
            harmonics = {}
            for j in (2, 3):
                amp = 0.05 * rho0 * rng.uniform(0.2, 1.0) / j
                ph = rng.uniform(0, 2 * np.pi)
                harmonics[j] = (amp * math.cos(ph), amp * math.sin(ph))
            curve = make_warped_curve(metric, rho0, harmonics)
            ver = verify_radial_bounds(metric, curve)
            assert ver.angle_passed and ver.width_passed
            assert ver.min_angle_slack >= -1e-9
            assert ver.width_margin >= -1e-7

    def test_eccentric_curve_rejected_not_judged(self):
        metric = make_warped("cubic", T=2.0, eps=0.05)
        bad = make_warped_curve(metric, 1.0, {2: (0.5, 0.0)})
        with pytest.raises(HypothesisViolation):
            verify_radial_bounds(metric, bad)

    def test_sphere_side_ball_hypothesis(self):
        metric = make_warped("perturbed_sin", T=1.5, delta=0.01)
        k2 = math.sqrt(metric.k_hi)
        # rho reaching past pi/(2 k2) violates the ball hypothesis
        rho0 = np.pi / (2 * k2) * 1.02
        if rho0 < metric.T:
            curve = make_warped_curve(metric, rho0, {})
            with pytest.raises(HypothesisViolation):
                verify_radial_bounds(metric, curve)

    def test_verification_dict(self):
        metric = make_warped("cubic", T=2.0, eps=0.05)
        curve = make_warped_curve(metric, 0.8, {2: (0.03, 0.01)})
        doc = verify_radial_bounds(metric, curve).to_dict()
        assert doc["schema"] == "warped_verification/1"
        assert doc["passed"] is True

    def test_warped_curve_serialization_round_trip(self):
        from sphericity.io import warped_curve_from_dict, warped_curve_to_dict
        metric = make_warped("cubic", T=2.0, eps=0.05)
        curve = make_warped_curve(metric, 0.8, {2: (0.03, 0.01)}, n=256)
        loaded = warped_curve_from_dict(warped_curve_to_dict(curve))
        assert np.array_equal(loaded.rho, curve.rho)
        assert np.array_equal(loaded.theta, curve.theta)
        assert loaded.kmin == curve.kmin
        ver = verify_radial_bounds(loaded.metric, loaded)
        assert ver.passed
