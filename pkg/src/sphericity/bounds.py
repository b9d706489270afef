"""Sharp lower bounds for the radial angle and their verifier.

For a closed curve with geodesic curvature >= k0 and a base point at
distance h from the curve, the angle phi between each radial geodesic and
the outward normal satisfies

    cos(phi) >= sqrt(sn(h) * sn(2R - h)) / sn(R) >= sn(h) / sn(R),

where R = circle_radius_of_curvature(k0) and sn is the generalized sine of
the geometry (identity / sin(k1 .)/k1 / sinh(k1 .)/k1).  On the flat plane
the sharp member reduces to sqrt(2 h k0 - h^2 k0^2) and the rough one to
h k0.  Equality holds exactly on circles, in the directions perpendicular
to the axis through the base point and the circle center; offset circles
are therefore the sharpness witnesses used by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import ClosedCurve, measure_radial
from .errors import GeometryError, HypothesisViolation
from .spaceforms import Kind, SpaceForm

#: verdict tolerance on the per-sample slack
DEFAULT_SLACK_TOL = 1e-9
#: measured-curvature safety margin subtracted before bound evaluation
DEFAULT_K0_GUARD = 1e-6
#: refined-distance safety margin subtracted before bound evaluation
DEFAULT_H_GUARD = 1e-8


def _check_k0(space: SpaceForm, k0: float) -> float:
    # circle_radius_of_curvature enforces the per-geometry validity range
    return space.circle_radius_of_curvature(k0)


@dataclass(frozen=True)
class AngleBound:
    """Bound parameters (k0, h) with the derived circle radius R."""

    space: SpaceForm
    k0: float
    h: float

    def __post_init__(self):
        radius = _check_k0(self.space, self.k0)
        if not -1e-12 <= self.h <= radius * (1 + 1e-12):
            raise GeometryError(
                f"h must lie in [0, R={radius}] (got h={self.h})")

    @property
    def R(self) -> float:
        return self.space.circle_radius_of_curvature(self.k0)

    def cos_phi(self) -> float:
        return cos_phi_lower_bound(self.space, self.k0, self.h)

    def cos_phi_weak(self) -> float:
        return cos_phi_weak_bound(self.space, self.k0, self.h)


def cos_phi_lower_bound(space: SpaceForm, k0: float, h) -> np.ndarray | float:
    """Sharp lower bound for cos(phi); 0 at h = 0, 1 at h = R, nondecreasing."""
    radius = _check_k0(space, k0)
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr < -1e-12) or np.any(h_arr > radius * (1 + 1e-12)):
        raise GeometryError(f"h must lie in [0, R={radius}]")
    h_arr = np.clip(h_arr, 0.0, radius)
    val = np.sqrt(np.maximum(space.sn(h_arr) * space.sn(2.0 * radius - h_arr),
                             0.0)) / space.sn(radius)
    out = np.clip(val, 0.0, 1.0)
    return float(out) if np.isscalar(h) or np.ndim(h) == 0 else out


def cos_phi_weak_bound(space: SpaceForm, k0: float, h) -> np.ndarray | float:
    """Rough lower bound sn(h)/sn(R); dominated by the sharp bound."""
    radius = _check_k0(space, k0)
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr < -1e-12) or np.any(h_arr > radius * (1 + 1e-12)):
        raise GeometryError(f"h must lie in [0, R={radius}]")
    h_arr = np.clip(h_arr, 0.0, radius)
    out = np.clip(space.sn(h_arr) / space.sn(radius), 0.0, 1.0)
    return float(out) if np.isscalar(h) or np.ndim(h) == 0 else out


def circle_exact_angle(space: SpaceForm, radius: float, h: float,
                       alpha) -> np.ndarray | float:
    """Exact radial angle on a circle of radius ``radius``.

    ``alpha`` is the central angle at the circle center between the point
    and the axis through the base point (at distance R - h from the
    center).  The law of sines in the geometry gives

        sin(phi) = sn(R - h) / sn(R) * sin(alpha),

    maximal at alpha = pi/2, where cos(phi) meets the sharp bound.
    """
    if not 0.0 <= h <= radius * (1 + 1e-12):
        raise GeometryError("h must lie in [0, R]")
    if space.kind is Kind.SPHERE and radius >= np.pi / space.k1:
        raise GeometryError("circle radius must stay below pi/k1")
    alpha_arr = np.asarray(alpha, dtype=float)
    ratio = space.sn(radius - h) / space.sn(radius)
    out = np.arcsin(np.clip(ratio * np.sin(alpha_arr), -1.0, 1.0))
    out = np.abs(out)
    return float(out) if np.isscalar(alpha) or np.ndim(alpha) == 0 else out


def mu0_decay_solution(space: SpaceForm, value_at_t1: float, t1: float,
                       t) -> np.ndarray | float:
    """Solution of u' + mu0(t) u = 0 with u(t1) = value_at_t1.

    The integrating factor of mu0 = sn'/sn gives u(t) = u(t1) sn(t1)/sn(t)
    exactly, so the residual of the returned function vanishes identically.
    On the sphere the solution is positive for t in (0, pi/k1) and
    increasing on (pi/(2 k1), pi/k1) when the datum is positive.
    """
    t_arr = np.asarray(t, dtype=float)
    if t1 <= 0.0 or np.any(t_arr <= 0.0):
        raise GeometryError("radial parameters must be positive")
    if space.kind is Kind.SPHERE:
        upper = np.pi / space.k1
        if t1 >= upper or np.any(t_arr >= upper):
            raise GeometryError("radial parameter must stay below pi/k1")
    out = value_at_t1 * space.sn(t1) / space.sn(t_arr)
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def radial_ode_residuals(curve: ClosedCurve, base, exclusion: int = 3):
    """Residual of the radial-angle ODE identity on monotone-t arcs.

    Along any arc where the distance t(s) from the base point is strictly
    monotone, parameterizing by arc length oriented toward increasing t
    gives

        kappa = mu0(t) cos(phi) - dphi/dsigma,

    in constant curvature (the circle curvature mu0 equals the normal
    curvature of the distance sphere there).  dphi/dsigma is computed with
    centered differences; samples within ``exclusion`` of a sign change of
    dt/ds (where the unsigned phi has a corner) and corner windows are
    excluded.  Returns (residuals, included_mask).
    """
    space = curve.space
    meas = measure_radial(curve, base)
    s, t, phi = curve.s, meas.t, meas.phi
    length = curve.total_length
    ds_f = (np.roll(s, -1) - s) % length
    ds_b = (s - np.roll(s, 1)) % length
    span = ds_f + ds_b
    dphi = (np.roll(phi, -1) - np.roll(phi, 1)) / span
    dt = (np.roll(t, -1) - np.roll(t, 1)) / span
    sgn = np.sign(dt)
    flips = sgn != np.roll(sgn, 1)
    near_extremum = flips.copy()
    for off in range(1, exclusion + 1):
        near_extremum |= np.roll(flips, off) | np.roll(flips, -off)
    included = np.isfinite(curve.kappa) & ~near_extremum & (sgn != 0)
    mu0 = np.asarray(space.mu0(t), dtype=float)
    resid = np.abs(curve.kappa - (mu0 * np.cos(phi) - sgn * dphi))
    return resid[included], included


# ---------------------------------------------------------------------------
# Verifier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AngleReport:
    """Per-sample slack of the measured angles against the sharp bound."""

    curve_provenance: str
    k0_used: float
    h_used: float
    bound_cos: float
    s: np.ndarray
    t: np.ndarray
    phi: np.ndarray
    cos_phi: np.ndarray
    slack: np.ndarray
    included: np.ndarray
    min_slack: float
    argmin_s: float
    excluded_corner_count: int
    passed: bool

    def rows(self):
        """(s, t, phi, cos_phi, bound, slack) for the included samples."""
        idx = np.nonzero(self.included)[0]
        for i in idx:
            yield (float(self.s[i]), float(self.t[i]), float(self.phi[i]),
                   float(self.cos_phi[i]), self.bound_cos,
                   float(self.slack[i]))

    def to_dict(self) -> dict:
        return {
            "schema": "angle_report/1",
            "provenance": self.curve_provenance,
            "k0_used": self.k0_used,
            "h_used": self.h_used,
            "bound_cos": self.bound_cos,
            "min_slack": self.min_slack,
            "argmin_s": self.argmin_s,
            "excluded_corner_count": self.excluded_corner_count,
            "passed": bool(self.passed),
            "rows": [list(r) for r in self.rows()],
        }


def _corner_exclusion_mask(corner: np.ndarray, band: int) -> np.ndarray:
    """True on corners and up to ``band`` samples on each side."""
    out = corner.copy()
    for off in range(1, band + 1):
        out |= np.roll(corner, off) | np.roll(corner, -off)
    return out


def verify_angle_bound(curve: ClosedCurve, base, k0_mode: str = "measured",
                       slack_tol: float = DEFAULT_SLACK_TOL,
                       corner_exclusion: int = 2,
                       k0_guard: float = DEFAULT_K0_GUARD,
                       h_guard: float = DEFAULT_H_GUARD) -> AngleReport:
    """Check every sample's cos(phi) against the sharp lower bound.

    ``k0_mode`` selects the curvature entering the bound: "measured" uses
    the refined measured minimum (minus ``k0_guard``, so estimator error
    cannot produce spurious failures), "declared" uses the generator's
    requested curvature.  The refined minimum distance loses ``h_guard``
    for the same reason; both guards only slacken the bound.

    Raises HypothesisViolation when the curve does not satisfy the
    hypotheses for its geometry (kmin <= k1 on the hyperbolic plane;
    curve leaving the closed hemisphere around the base point on the
    sphere when kmin >= 0).
    """
    space = curve.space
    if k0_mode == "measured":
        k0_used = curve.kmin - k0_guard
        if space.kind is Kind.SPHERE and k0_used < 0.0 \
                and curve.kmin >= -1e-9:
            k0_used = 0.0   # geodesic circles measure kmin ~ 0 up to noise
    elif k0_mode == "declared":
        if curve.k0_declared is None:
            raise GeometryError("curve carries no declared curvature")
        k0_used = curve.k0_declared
    else:
        raise GeometryError(f"unknown k0_mode {k0_mode!r}")

    if space.kind is Kind.FLAT and k0_used <= 0.0:
        raise HypothesisViolation(
            f"flat-plane bound requires kmin > 0 (got {k0_used})")
    if space.kind is Kind.HYPERBOLIC and k0_used <= space.k1:
        raise HypothesisViolation(
            f"hyperbolic bound requires kmin > k1 (got {k0_used})")
    if space.kind is Kind.SPHERE and k0_used < 0.0:
        raise HypothesisViolation(
            f"sphere bound requires kmin >= 0 (got {k0_used})")

    meas = measure_radial(curve, base)

    if space.kind is Kind.SPHERE:
        # hemisphere around the base point (closed, with tolerance)
        if float(np.max(meas.t)) > np.pi / (2.0 * space.k1) * (1 + 1e-9):
            raise HypothesisViolation(
                "curve leaves the closed hemisphere around the base point")

    radius = space.circle_radius_of_curvature(k0_used)
    h_used = min(max(meas.h - h_guard, 0.0), radius)
    bound = float(cos_phi_lower_bound(space, k0_used, h_used))

    cos_phi = np.cos(meas.phi)
    slack = cos_phi - bound
    included = ~_corner_exclusion_mask(curve.corner, corner_exclusion)
    excluded = int(np.sum(~included))
    if not np.any(included):
        raise GeometryError("corner exclusion removed every sample")
    min_slack = float(np.min(slack[included]))
    argmin_idx = int(np.nonzero(included)[0][np.argmin(slack[included])])
    return AngleReport(curve_provenance=curve.provenance, k0_used=float(k0_used),
                       h_used=float(h_used), bound_cos=bound, s=curve.s,
                       t=meas.t, phi=meas.phi, cos_phi=cos_phi, slack=slack,
                       included=included, min_slack=min_slack,
                       argmin_s=float(curve.s[argmin_idx]),
                       excluded_corner_count=excluded,
                       passed=bool(min_slack >= -slack_tol))
