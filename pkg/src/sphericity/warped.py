"""Rotationally symmetric metrics ds^2 = dt^2 + f(t)^2 dtheta^2.

These metrics exercise the curvature-comparison machinery beyond constant
curvature: the Gaussian curvature is K(t) = -f''(t)/f(t) and the coordinate
circle of radius t has geodesic curvature mu(t) = f'(t)/f(t).  When K stays
in a one-signed band, mu(t) is dominated by the circle curvature mu0(t) of
the matching constant-curvature comparison plane, and closed curves around
the pole satisfy the same radial-angle and annulus-width bounds as in that
plane.

The base point is always the warp pole: t is then the exact geodesic
distance from the base point, which keeps every check closed-form.
Off-pole base points would require geodesic shooting and are deliberately
out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import cos_phi_lower_bound
from .errors import CurveGenerationError, GeometryError, HypothesisViolation
from .search import refine_extremum
from .spaceforms import SpaceForm
from .spindles import spindle_optimum

#: tolerance on the declared curvature band during certification
BAND_GUARD = 1e-9


@dataclass(frozen=True)
class WarpedMetric:
    """A certified warped metric dt^2 + f(t)^2 dtheta^2 on (0, T].

    ``f``, ``fp``, ``fpp`` are the warping function and its first two
    derivatives.  ``k_lo``/``k_hi`` hold the measured Gaussian curvature
    band over the certification grid.
    """

    family: str
    params: dict
    T: float
    f: callable = field(repr=False)
    fp: callable = field(repr=False)
    fpp: callable = field(repr=False)
    k_lo: float = 0.0
    k_hi: float = 0.0

    def curvature(self, t):
        """Gaussian curvature K(t) = -f''/f."""
        t = np.asarray(t, dtype=float)
        return -self.fpp(t) / self.f(t)

    def mu(self, t):
        """Geodesic curvature f'/f of the coordinate circle of radius t."""
        t = np.asarray(t, dtype=float)
        return self.fp(t) / self.f(t)


def _family_functions(family: str, params: dict):
    if family == "flat":
        return (lambda t: t,
                lambda t: np.ones_like(np.asarray(t, dtype=float)),
                lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    if family == "hyperbolic":
        k1 = float(params["k1"])
        return (lambda t: np.sinh(k1 * t) / k1,
                lambda t: np.cosh(k1 * t),
                lambda t: k1 * np.sinh(k1 * t))
    if family == "spherical":
        k1 = float(params["k1"])
        return (lambda t: np.sin(k1 * t) / k1,
                lambda t: np.cos(k1 * t),
                lambda t: -k1 * np.sin(k1 * t))
    if family == "cubic":
        eps = float(params["eps"])
        return (lambda t: t + eps * t ** 3,
                lambda t: 1.0 + 3.0 * eps * np.asarray(t, dtype=float) ** 2,
                lambda t: 6.0 * eps * np.asarray(t, dtype=float))
    if family == "perturbed_sin":
        # f = sin(a t)(1 + delta sin^2(a t)) / a, with a chosen so the
        # curvature band starts exactly at 1
        delta = float(params["delta"])
        if not 0.0 < delta < 1.0 / 6.0:
            raise CurveGenerationError("perturbed_sin requires 0 < delta < 1/6")
        a = math.sqrt((1.0 + delta) / (1.0 - 6.0 * delta))

        def f(t):
            x = a * np.asarray(t, dtype=float)
            return np.sin(x) * (1.0 + delta * np.sin(x) ** 2) / a

        def fp(t):
            x = a * np.asarray(t, dtype=float)
            s, c = np.sin(x), np.cos(x)
            return c + 3.0 * delta * s ** 2 * c

        def fpp(t):
            x = a * np.asarray(t, dtype=float)
            s, c = np.sin(x), np.cos(x)
            return a * (-s + 3.0 * delta * s * (2.0 * c ** 2 - s ** 2))

        return f, fp, fpp
    if family == "sinh_bump":
        # hyperbolic warp times a t^3-damped Gaussian bump: the cubic factor
        # keeps the pole smooth (f(0)=0, f'(0)=1, f''(0)=0); K stays
        # nonpositive for small amplitudes (certified, not assumed)
        k1 = float(params["k1"])
        amp = float(params["amp"])
        center = float(params["center"])
        width = float(params["width"])

        def _bump(t):
            t = np.asarray(t, dtype=float)
            u = (t - center) / width
            e = np.exp(-u * u)
            ep = -2.0 * u / width * e
            epp = (4.0 * u * u - 2.0) / width ** 2 * e
            g = amp * t ** 3 * e
            gp = amp * (3.0 * t ** 2 * e + t ** 3 * ep)
            gpp = amp * (6.0 * t * e + 6.0 * t ** 2 * ep + t ** 3 * epp)
            return g, gp, gpp

        def f(t):
            t = np.asarray(t, dtype=float)
            g, _, _ = _bump(t)
            return np.sinh(k1 * t) / k1 * (1.0 + g)

        def fp(t):
            t = np.asarray(t, dtype=float)
            g, gp, _ = _bump(t)
            return np.cosh(k1 * t) * (1.0 + g) + np.sinh(k1 * t) / k1 * gp

        def fpp(t):
            t = np.asarray(t, dtype=float)
            g, gp, gpp = _bump(t)
            return (k1 * np.sinh(k1 * t) * (1.0 + g)
                    + 2.0 * np.cosh(k1 * t) * gp
                    + np.sinh(k1 * t) / k1 * gpp)

        return f, fp, fpp
    raise CurveGenerationError(f"unknown warped family {family!r}")


def _declared_band(family: str, params: dict, T: float):
    if family == "flat":
        return 0.0, 0.0
    if family == "hyperbolic":
        k1 = float(params["k1"])
        return -k1 * k1, -k1 * k1
    if family == "spherical":
        k1 = float(params["k1"])
        return k1 * k1, k1 * k1
    if family == "cubic":
        eps = float(params["eps"])
        return -6.0 * eps, -6.0 * eps / (1.0 + eps * T * T)
    if family == "perturbed_sin":
        delta = float(params["delta"])
        a2 = (1.0 + delta) / (1.0 - 6.0 * delta)
        return 1.0, a2 * (1.0 + 3.0 * delta)
    if family == "sinh_bump":
        k1 = float(params["k1"])
        # conservative declaration; certification measures the real band
        return -4.0 * k1 * k1, 0.0
    raise CurveGenerationError(f"unknown warped family {family!r}")


def make_warped(family: str, *, T: float, check_points: int = 10_000,
                **params) -> WarpedMetric:
    """Build and certify a warped metric.

    The curvature band is measured on a dense radius grid and must stay
    inside the family's declared band (with a small guard); the warp must
    be positive on (0, T].  Violations are rejected with the offending
    radius, never trusted.
    """
    if T <= 0.0:
        raise CurveGenerationError("T must be positive")
    f, fp, fpp = _family_functions(family, params)
    lo_decl, hi_decl = _declared_band(family, params, T)
    t = np.linspace(T / check_points, T, check_points)
    fv = f(t)
    if np.any(fv <= 0.0):
        bad = float(t[np.argmax(fv <= 0.0)])
        raise CurveGenerationError(
            f"warp vanishes inside (0, T] at t = {bad:.6f}", where=bad)
    K = -fpp(t) / fv
    k_lo, k_hi = float(np.min(K)), float(np.max(K))
    if k_lo < lo_decl - BAND_GUARD or k_hi > hi_decl + BAND_GUARD:
        bad = float(t[int(np.argmin(K)) if k_lo < lo_decl - BAND_GUARD
                      else int(np.argmax(K))])
        raise CurveGenerationError(
            f"curvature band [{k_lo:.6g}, {k_hi:.6g}] leaves the declared "
            f"band [{lo_decl:.6g}, {hi_decl:.6g}] at t = {bad:.6f}", where=bad)
    return WarpedMetric(family=family, params=dict(params), T=float(T),
                        f=f, fp=fp, fpp=fpp, k_lo=k_lo, k_hi=k_hi)


def circle_normal_curvature(metric: WarpedMetric, t):
    """Geodesic curvature of the coordinate circle at radius t."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0) or np.any(t_arr > metric.T * (1 + 1e-12)):
        raise GeometryError(f"radius must lie in (0, T={metric.T}]")
    out = metric.mu(t_arr)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# Circle-curvature comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuComparisonReport:
    """Slack of mu(t) <= mu0(t) against the comparison plane."""

    comparison: str           # "spherical" or "hyperbolic" or "flat"
    k1_used: float
    radii: np.ndarray
    slack: np.ndarray
    min_slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "schema": "mu_comparison/1",
            "comparison": self.comparison,
            "k1_used": self.k1_used,
            "min_slack": self.min_slack,
            "passed": bool(self.passed),
        }


def comparison_space(metric: WarpedMetric) -> SpaceForm:
    """Constant-curvature plane matched to the metric's curvature band.

    A nonpositive band [K_lo, 0] compares against the hyperbolic plane of
    curvature K_lo (k1 = sqrt(-K_lo)); a band [K_lo, K_hi] with K_lo > 0
    compares against the sphere of curvature K_lo.  The comparison constant
    always comes from the side the hypothesis bounds: the most negative
    curvature below, the least positive curvature above.
    """
    if metric.k_hi <= BAND_GUARD:
        k1 = math.sqrt(max(-metric.k_lo, 0.0))
        if k1 == 0.0:
            return SpaceForm.flat()
        return SpaceForm.hyperbolic(k1)
    if metric.k_lo >= -BAND_GUARD and metric.k_lo > 0.0:
        return SpaceForm.sphere(math.sqrt(metric.k_lo))
    raise HypothesisViolation(
        f"curvature band [{metric.k_lo:.6g}, {metric.k_hi:.6g}] is not "
        "one-signed; no comparison plane applies")


def verify_circle_curvature_comparison(metric: WarpedMetric,
                                       n_radii: int = 1000,
                                       slack_tol: float = 1e-9
                                       ) -> MuComparisonReport:
    """Check mu(t) <= mu0(t) at n_radii radii in (0, T].

    mu0 is the circle curvature of the comparison plane; radii where mu0
    is undefined (beyond pi/k1 on the sphere side) are skipped.
    """
    space = comparison_space(metric)
    t_hi = metric.T
    if space.kind.value == "sphere":
        t_hi = min(t_hi, np.pi / space.k1 * (1 - 1e-9))
    radii = np.linspace(t_hi / n_radii, t_hi, n_radii)
    mu = metric.mu(radii)
    mu0 = np.asarray(space.mu0(radii), dtype=float)
    slack = mu0 - mu
    min_slack = float(np.min(slack))
    return MuComparisonReport(comparison=space.kind.value, k1_used=space.k1,
                              radii=radii, slack=slack, min_slack=min_slack,
                              passed=bool(min_slack >= -slack_tol))


# ---------------------------------------------------------------------------
# Closed graph curves around the pole
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WarpedCurve:
    """Closed curve t = rho(theta) around the pole of a warped metric.

    ``kappa`` is the geodesic curvature from the graph formula

        kappa = (2 f' rho'^2 - f rho'' + f^2 f') / (rho'^2 + f^2)^(3/2)

    with f, f' evaluated at rho(theta); derivatives of rho are centered
    differences on the uniform theta grid (the generator also knows the
    analytic ones, used as an oracle in the tests).
    """

    metric: WarpedMetric
    theta: np.ndarray
    rho: np.ndarray
    kappa: np.ndarray
    kmin: float

    @property
    def n(self) -> int:
        return len(self.theta)


def _fd_derivatives(rho, dtheta):
    rp = (np.roll(rho, -1) - np.roll(rho, 1)) / (2.0 * dtheta)
    rpp = (np.roll(rho, -1) - 2.0 * rho + np.roll(rho, 1)) / dtheta ** 2
    return rp, rpp


def warped_graph_kappa(metric: WarpedMetric, rho, rho_p, rho_pp):
    f = metric.f(rho)
    fp = metric.fp(rho)
    num = 2.0 * fp * rho_p ** 2 - f * rho_pp + f ** 2 * fp
    return num / (rho_p ** 2 + f ** 2) ** 1.5


def make_warped_curve(metric: WarpedMetric, rho0: float, harmonics=None,
                      n: int = 4096) -> WarpedCurve:
    """Graph curve rho(theta) = rho0 + sum (a_j cos j theta + b_j sin j theta).

    Rejected unless 0 < rho(theta) <= T everywhere.
    """
    harmonics = dict(harmonics or {})
    theta = 2.0 * np.pi * np.arange(n) / n
    rho = np.full(n, float(rho0))
    for j, (aj, bj) in harmonics.items():
        rho += aj * np.cos(j * theta) + bj * np.sin(j * theta)
    if np.any(rho <= 0.0) or np.any(rho > metric.T * (1 + 1e-12)):
        bad = float(theta[int(np.argmax((rho <= 0) | (rho > metric.T)))])
        raise CurveGenerationError(
            f"rho(theta) leaves (0, T] at theta = {bad:.6f}", where=bad)
    rho_p, rho_pp = _fd_derivatives(rho, theta[1] - theta[0])
    kappa = warped_graph_kappa(metric, rho, rho_p, rho_pp)
    idx = int(np.argmin(kappa))
    _, kmin = refine_extremum(theta, kappa, idx, mode="min",
                              period=2.0 * np.pi)
    kmin = min(kmin, float(np.min(kappa)))
    return WarpedCurve(metric=metric, theta=theta, rho=rho, kappa=kappa,
                       kmin=kmin)


def warped_curve_kappa_analytic(metric: WarpedMetric, rho0: float,
                                harmonics, theta) -> np.ndarray:
    """Oracle: graph curvature with analytic rho', rho''."""
    harmonics = dict(harmonics or {})
    theta = np.asarray(theta, dtype=float)
    rho = np.full_like(theta, float(rho0))
    rho_p = np.zeros_like(theta)
    rho_pp = np.zeros_like(theta)
    for j, (aj, bj) in harmonics.items():
        c, s = np.cos(j * theta), np.sin(j * theta)
        rho += aj * c + bj * s
        rho_p += j * (-aj * s + bj * c)
        rho_pp += -j * j * (aj * c + bj * s)
    return warped_graph_kappa(metric, rho, rho_p, rho_pp)


# ---------------------------------------------------------------------------
# Bound verification on warped metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WarpedVerification:
    """Angle- and width-bound verdicts for a pole-centered warped curve."""

    comparison: str
    k1_used: float
    k0_used: float
    h: float
    bound_cos: float
    min_angle_slack: float
    angle_passed: bool
    r: float
    rho1: float
    d: float
    d0: float
    width_margin: float
    width_passed: bool

    @property
    def passed(self) -> bool:
        return self.angle_passed and self.width_passed

    def to_dict(self) -> dict:
        return {
            "schema": "warped_verification/1",
            "comparison": self.comparison,
            "k1_used": self.k1_used,
            "k0_used": self.k0_used,
            "h": self.h,
            "bound_cos": self.bound_cos,
            "min_angle_slack": self.min_angle_slack,
            "angle_passed": bool(self.angle_passed),
            "r": self.r,
            "rho1": self.rho1,
            "d": self.d,
            "d0": self.d0,
            "width_margin": self.width_margin,
            "width_passed": bool(self.width_passed),
            "passed": bool(self.passed),
        }


def verify_radial_bounds(metric: WarpedMetric, curve: WarpedCurve,
                         slack_tol: float = 1e-9,
                         margin_tol: float = 1e-7,
                         k0_guard: float = 1e-6) -> WarpedVerification:
    """Verify the radial-angle and annulus-width bounds about the pole.

    The comparison plane comes from the metric's certified curvature band.
    Hypotheses checked before judging (HypothesisViolation otherwise):

    * nonpositive band: measured kmin > k1;
    * positive band: measured kmin >= 0 and the curve inside the ball of
      radius pi/(2 k2) around the pole, k2^2 the band's upper end.

    cos(phi) per sample comes from the graph formula
    cos(phi) = 1 / sqrt(1 + (rho'/f(rho))^2); the annulus about the pole
    has r = min rho and rho1 = max rho (the pole stands in for the
    incenter, which the generators place at the pole by construction).
    """
    space = comparison_space(metric)
    k0_used = curve.kmin - k0_guard
    if space.kind.value in ("hyperbolic",):
        if k0_used <= space.k1:
            raise HypothesisViolation(
                f"nonpositive band requires kmin > k1 = {space.k1:.6g} "
                f"(got {k0_used:.6g})")
    elif space.kind.value == "sphere":
        if k0_used < 0.0:
            raise HypothesisViolation("positive band requires kmin >= 0")
        k2 = math.sqrt(metric.k_hi)
        if float(np.max(curve.rho)) > np.pi / (2.0 * k2) * (1 + 1e-9):
            raise HypothesisViolation(
                "curve leaves the ball of radius pi/(2 k2) around the pole")
    else:  # flat comparison (K identically 0)
        if k0_used <= 0.0:
            raise HypothesisViolation("flat comparison requires kmin > 0")

    dtheta = curve.theta[1] - curve.theta[0]
    rho_p, _ = _fd_derivatives(curve.rho, dtheta)
    cos_phi = 1.0 / np.sqrt(1.0 + (rho_p / metric.f(curve.rho)) ** 2)

    idx_min = int(np.argmin(curve.rho))
    _, h = refine_extremum(curve.theta, curve.rho, idx_min, mode="min",
                           period=2.0 * np.pi)
    h = min(h, float(np.min(curve.rho)))
    idx_max = int(np.argmax(curve.rho))
    _, rho1 = refine_extremum(curve.theta, curve.rho, idx_max, mode="max",
                              period=2.0 * np.pi)
    rho1 = max(rho1, float(np.max(curve.rho)))

    radius = space.circle_radius_of_curvature(k0_used)
    h_eff = min(max(h - 1e-8, 0.0), radius)
    bound = float(cos_phi_lower_bound(space, k0_used, h_eff))
    min_slack = float(np.min(cos_phi - bound))

    d = rho1 - h
    d0 = spindle_optimum(space, k0_used).d0
    margin = d0 - d
    return WarpedVerification(
        comparison=space.kind.value, k1_used=space.k1, k0_used=float(k0_used),
        h=float(h), bound_cos=bound, min_angle_slack=min_slack,
        angle_passed=bool(min_slack >= -slack_tol), r=float(h),
        rho1=float(rho1), d=float(d), d0=float(d0),
        width_margin=float(margin),
        width_passed=bool(margin >= -margin_tol))
