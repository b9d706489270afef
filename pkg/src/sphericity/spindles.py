"""The extremal spindle/lune family and its width maximum.

A spindle of inradius r (for a fixed boundary curvature k0) is the convex
body whose 2D section is the lune of :func:`sphericity.curves.make_lune`:
two smaller circular arcs of radius R = circle_radius_of_curvature(k0)
meeting at two corners.  Its inscribed and circumscribed circles about the
section midpoint have radii r and rho(r); the enclosing annulus has width
d(r) = rho(r) - r, which vanishes at both endpoints r = 0 and r = R and is
maximized at a closed-form r0.

The closed forms come from the right geodesic triangle with legs (R - r,
rho) and hypotenuse R:

* flat:        rho = sqrt(2 r / k0 - r^2)
* sphere:      cos(k1 rho)  = cos(k1 R) / cos(k1 (R - r))
* hyperbolic:  cosh(k1 rho) = cosh(k1 R) / cosh(k1 (R - r))

The curved forms are evaluated through half-angle identities
(tan^2(k1 rho / 2) = tan(k1 (2R - r)/2) tan(k1 r / 2) and the tanh analog),
which are algebraically identical but remain accurate as k1 -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .search import golden_max
from .spaceforms import Kind, SpaceForm


@dataclass(frozen=True)
class SpindleParams:
    """One member of the spindle family: inradius r, circumradius rho,
    annulus width d = rho - r."""

    space: SpaceForm
    k0: float
    R: float
    r: float
    rho: float
    d: float


@dataclass(frozen=True)
class SpindleOptimum:
    """Closed-form maximizer of the spindle width."""

    space: SpaceForm
    k0: float
    R: float
    r0: float
    d0: float


def _check_r(space, k0, r):
    radius = space.circle_radius_of_curvature(k0)
    r = np.asarray(r, dtype=float)
    if np.any(r < -1e-15) or np.any(r > radius * (1 + 1e-12)):
        raise GeometryError(f"spindle inradius must lie in [0, R={radius}]")
    return radius, np.clip(r, 0.0, radius)


def spindle_rho(space: SpaceForm, k0: float, r):
    """Circumradius (about the section midpoint) of the spindle of inradius r.

    rho(0) = 0 and rho(R) = R; vectorized over r.
    """
    radius, r = _check_r(space, k0, r)
    if space.kind is Kind.FLAT:
        return np.sqrt(r * (2.0 * radius - r))
    k = space.k1
    if space.kind is Kind.SPHERE:
        prod = np.tan(0.5 * k * (2.0 * radius - r)) * np.tan(0.5 * k * r)
        return 2.0 / k * np.arctan(np.sqrt(np.maximum(prod, 0.0)))
    prod = np.tanh(0.5 * k * (2.0 * radius - r)) * np.tanh(0.5 * k * r)
    return 2.0 / k * np.arctanh(np.sqrt(np.maximum(prod, 0.0)))


def spindle_width(space: SpaceForm, k0: float, r):
    """Width d(r) = rho(r) - r of the annulus enclosing the spindle."""
    _, r = _check_r(space, k0, r)
    return spindle_rho(space, k0, r) - r


def spindle_params(space: SpaceForm, k0: float, r: float) -> SpindleParams:
    radius, rc = _check_r(space, k0, float(r))
    rho = float(spindle_rho(space, k0, rc))
    return SpindleParams(space=space, k0=float(k0), R=radius, r=float(rc),
                         rho=rho, d=rho - float(rc))


def _half_width_angle(space, radius: float) -> float:
    """arccos(sqrt(cos k1 R)) resp. arccosh(sqrt(cosh k1 R)), stably.

    Uses tan(theta/2) = sqrt(1 - cos) / (1 + sqrt(cos)) and the hyperbolic
    analog so the value degrades gracefully as k1 -> 0.
    """
    k = space.k1
    u = k * radius
    if space.kind is Kind.SPHERE:
        c = math.cos(u)
        half = math.sqrt(2.0) * abs(math.sin(0.5 * u)) / (1.0 + math.sqrt(c))
        return 2.0 * math.atan(half)
    c = math.cosh(u)
    half = math.sqrt(2.0) * math.sinh(0.5 * u) / (1.0 + math.sqrt(c))
    return 2.0 * math.atanh(half)


def spindle_optimum(space: SpaceForm, k0: float) -> SpindleOptimum:
    """Closed-form maximizer (r0, d0) of the spindle width.

    * flat:        r0 = 1/(k0 (2 + sqrt 2)),       d0 = (sqrt 2 - 1)/k0
    * sphere:      r0 = R - arccos(sqrt(cos k1 R))/k1,
                   d0 = 2 arccos(sqrt(cos k1 R))/k1 - R
    * hyperbolic:  the arccosh/cosh analogs

    The curved maximizers satisfy the stationarity relation
    cos(k1 R) = cos^2(k1 (R - r0)) (cosh analog in the hyperbolic plane).
    """
    radius = space.circle_radius_of_curvature(k0)
    if space.kind is Kind.FLAT:
        r0 = 1.0 / (k0 * (2.0 + math.sqrt(2.0)))
        d0 = (math.sqrt(2.0) - 1.0) / k0
        return SpindleOptimum(space=space, k0=float(k0), R=radius,
                              r0=r0, d0=d0)
    theta = _half_width_angle(space, radius)
    r0 = radius - theta / space.k1
    d0 = 2.0 * theta / space.k1 - radius
    return SpindleOptimum(space=space, k0=float(k0), R=radius, r0=r0, d0=d0)


def spindle_max_width_alt(space: SpaceForm, k0: float) -> float:
    """Maximal spindle width written directly in terms of (k0, k1).

    Algebraically identical to ``spindle_optimum(space, k0).d0``:

    * sphere:      (2 arccos(sqrt(k0) / (k0^2 + k1^2)^(1/4))
                     - arccot(k0 / k1)) / k1
    * hyperbolic:  (2 arccosh(sqrt(k0) / (k0^2 - k1^2)^(1/4))
                     - arccoth(k0 / k1)) / k1

    since cos(arccot x) = x / sqrt(x^2 + 1) and cosh(arccoth x) =
    x / sqrt(x^2 - 1).  Defined for the curved planes only.
    """
    k1 = space.k1
    if space.kind is Kind.SPHERE:
        if k0 <= 0.0:
            raise GeometryError("sphere form requires k0 > 0")
        inner = math.sqrt(k0) / (k0 * k0 + k1 * k1) ** 0.25
        return (2.0 * math.acos(min(1.0, inner))
                - math.atan2(k1, k0)) / k1
    if space.kind is Kind.HYPERBOLIC:
        if k0 <= k1:
            raise GeometryError("hyperbolic form requires k0 > k1")
        inner = math.sqrt(k0) / (k0 * k0 - k1 * k1) ** 0.25
        return (2.0 * math.acosh(max(1.0, inner))
                - math.atanh(k1 / k0)) / k1
    raise GeometryError("the rewritten width form exists for curved planes only")


def numeric_spindle_optimum(space: SpaceForm, k0: float,
                            tol: float = 1e-12) -> tuple[float, float]:
    """Independent golden-section oracle for the width maximum.

    Maximizes r -> spindle_width(space, k0, r) on [0, R] directly; used in
    tests against the closed forms, never as the primary answer.
    """
    radius = space.circle_radius_of_curvature(k0)

    def width(r):
        return float(spindle_width(space, k0, r))

    r_star, d_star = golden_max(width, 0.0, radius, tol=tol)
    return r_star, d_star


def spindle_table_rows(space: SpaceForm, k0_values, r_count: int = 33):
    """Rows (space, k1, k0, r, rho, d, r0, d0) over an r grid per k0."""
    rows = []
    for k0 in k0_values:
        opt = spindle_optimum(space, k0)
        r_grid = np.linspace(0.0, opt.R, r_count)
        rho = spindle_rho(space, k0, r_grid)
        for r, rh in zip(r_grid, rho):
            rows.append({
                "space": space.kind.value,
                "k1": space.k1,
                "k0": float(k0),
                "r": float(r),
                "rho": float(rh),
                "d": float(rh - r),
                "r0": opt.r0,
                "d0": opt.d0,
            })
    return rows
