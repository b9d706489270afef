"""JSON serialization of curves and warped metrics.

Curve files carry the space-form header and the per-sample data (coords,
arc length, measured curvature, corner flag, and optionally the exact
tangent/outward normal).  Values are written with a configurable number of
significant digits; at the default 17 the round trip is bit-identical.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .curves import ClosedCurve
from .errors import GeometryError
from .spaceforms import SpaceForm
from .warped import WarpedMetric, make_warped

DEFAULT_DIGITS = 17


def _fmt(x: float, digits: int) -> float:
    if not math.isfinite(x):
        return x
    return float(format(float(x), f".{digits}g"))


def _fmt_list(arr, digits: int):
    return [_fmt(float(v), digits) for v in np.asarray(arr).ravel()]


def space_to_dict(space: SpaceForm) -> dict:
    return {"kind": space.kind.value, "k1": space.k1}


def space_from_dict(d: dict) -> SpaceForm:
    kind = d["kind"]
    if kind == "flat":
        return SpaceForm.flat()
    if kind == "sphere":
        return SpaceForm.sphere(float(d["k1"]))
    if kind == "hyperbolic":
        return SpaceForm.hyperbolic(float(d["k1"]))
    raise GeometryError(f"unknown space kind {kind!r}")


def curve_to_dict(curve: ClosedCurve, digits: int = DEFAULT_DIGITS,
                  include_frames: bool = True) -> dict:
    samples = []
    for i in range(curve.n):
        row = {
            "coords": _fmt_list(curve.points[i], digits),
            "s": _fmt(curve.s[i], digits),
            "kappa": None if not np.isfinite(curve.kappa[i])
            else _fmt(curve.kappa[i], digits),
            "corner": bool(curve.corner[i]),
        }
        if include_frames:
            row["tangent"] = _fmt_list(curve.tangents[i], digits)
            row["normal_out"] = _fmt_list(curve.normals_out[i], digits)
        samples.append(row)
    return {
        "schema": "closed_curve/1",
        "space": space_to_dict(curve.space),
        "provenance": curve.provenance,
        "k0_declared": None if curve.k0_declared is None
        else _fmt(curve.k0_declared, digits),
        "total_length": _fmt(curve.total_length, digits),
        "kmin": _fmt(curve.kmin, digits),
        "closure_gap": _fmt(curve.closure_gap, digits),
        "hint_center": None if curve.hint_center is None
        else _fmt_list(curve.hint_center, digits),
        "samples": samples,
    }


def _frames_from_differences(space, points):
    """Tangents/normals recovered from the sampled points alone."""
    fwd = np.roll(points, -1, axis=0)
    bwd = np.roll(points, 1, axis=0)
    chord = space.log_map(points, fwd) - space.log_map(points, bwd)
    tangents = space.project_tangent(points, chord)
    tangents = tangents / space.norm(points, tangents)[:, None]
    normals = -space.rotate90(points, tangents)
    return tangents, normals


def curve_from_dict(data: dict) -> ClosedCurve:
    if data.get("schema") != "closed_curve/1":
        raise GeometryError(f"unsupported curve schema {data.get('schema')!r}")
    space = space_from_dict(data["space"])
    samples = data["samples"]
    points = np.array([s["coords"] for s in samples], dtype=float)
    s_arr = np.array([s["s"] for s in samples], dtype=float)
    kappa = np.array([math.nan if s["kappa"] is None else s["kappa"]
                      for s in samples], dtype=float)
    corner = np.array([s["corner"] for s in samples], dtype=bool)
    if all("tangent" in s and "normal_out" in s for s in samples):
        tangents = np.array([s["tangent"] for s in samples], dtype=float)
        normals = np.array([s["normal_out"] for s in samples], dtype=float)
    else:
        from .curves import winding_number
        from .spaceforms import karcher_mean
        tangents, normals = _frames_from_differences(space, points)
        seed = karcher_mean(space, points)
        if winding_number(space, points, seed) != 1:
            raise GeometryError("stored curves must be positively oriented")
    hint = data.get("hint_center")
    return ClosedCurve(
        space=space, points=points, s=s_arr, tangents=tangents,
        normals_out=normals, kappa=kappa, corner=corner,
        total_length=float(data["total_length"]), kmin=float(data["kmin"]),
        provenance=data["provenance"],
        k0_declared=None if data.get("k0_declared") is None
        else float(data["k0_declared"]),
        closure_gap=float(data.get("closure_gap", 0.0)),
        hint_center=None if hint is None else np.array(hint, dtype=float))


def save_curve(curve: ClosedCurve, path, digits: int = DEFAULT_DIGITS):
    with open(path, "w") as fh:
        json.dump(curve_to_dict(curve, digits=digits), fh, indent=1)
        fh.write("\n")


def load_curve(path) -> ClosedCurve:
    with open(path) as fh:
        return curve_from_dict(json.load(fh))


def warped_curve_to_dict(curve, digits: int = DEFAULT_DIGITS) -> dict:
    """Serialize a pole-centered graph curve with its metric header."""
    return {
        "schema": "warped_curve/1",
        "metric": metric_to_dict(curve.metric, digits=digits),
        "kmin": _fmt(curve.kmin, digits),
        "samples": [
            {"theta": _fmt(th, digits), "rho": _fmt(r, digits),
             "kappa": _fmt(k, digits)}
            for th, r, k in zip(curve.theta, curve.rho, curve.kappa)
        ],
    }


def warped_curve_from_dict(data: dict):
    from .warped import WarpedCurve
    if data.get("schema") != "warped_curve/1":
        raise GeometryError(
            f"unsupported warped curve schema {data.get('schema')!r}")
    metric = metric_from_dict(data["metric"])
    theta = np.array([s["theta"] for s in data["samples"]], dtype=float)
    rho = np.array([s["rho"] for s in data["samples"]], dtype=float)
    kappa = np.array([s["kappa"] for s in data["samples"]], dtype=float)
    return WarpedCurve(metric=metric, theta=theta, rho=rho, kappa=kappa,
                       kmin=float(data["kmin"]))


def metric_to_dict(metric: WarpedMetric, digits: int = DEFAULT_DIGITS) -> dict:
    return {
        "schema": "warped_metric/1",
        "family": metric.family,
        "params": {k: _fmt(v, digits) for k, v in metric.params.items()},
        "T": _fmt(metric.T, digits),
        "k_lo": _fmt(metric.k_lo, digits),
        "k_hi": _fmt(metric.k_hi, digits),
    }


def metric_from_dict(data: dict) -> WarpedMetric:
    if data.get("schema") != "warped_metric/1":
        raise GeometryError(f"unsupported metric schema {data.get('schema')!r}")
    return make_warped(data["family"], T=float(data["T"]),
                       **{k: float(v) for k, v in data["params"].items()})
