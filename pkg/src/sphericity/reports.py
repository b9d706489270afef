"""Suite runner: build test objects from a config, verify, emit reports.

A run is fully determined by the config document and its seed; the random
generator is numpy's default PCG64 (``numpy.random.default_rng(seed)``),
which is stable across platforms, so reports are byte-identical across
repeated runs (the timestamp lives in an isolated metadata field and is
excluded from the config hash).
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import verify_angle_bound
from .curves import (make_circle, make_disc_intersection, make_frame_ode_curve,
                     make_lune, make_support_curve)
from .errors import GeometryError, HypothesisViolation
from .io import load_curve, space_from_dict
from .layers import layer_width
from .spaceforms import SpaceForm
from .spindles import (numeric_spindle_optimum, spindle_max_width_alt,
                       spindle_optimum, spindle_table_rows)
from .warped import make_warped, make_warped_curve, \
    verify_circle_curvature_comparison, verify_radial_bounds

PLOT_DIGITS = 17

SUITES = ("angle", "width", "spindle-table", "warped", "sweep", "all")


class ConfigError(ValueError):
    """Malformed run config; the message names the offending key."""


def _g(cfg: dict, key: str, default=None, required: bool = False):
    if key in cfg:
        return cfg[key]
    if required:
        raise ConfigError(f"config is missing required key {key!r}")
    return default


@dataclass
class SuiteResult:
    """Named check results plus plot-ready series."""

    suite: str
    checks: list = field(default_factory=list)
    series: dict = field(default_factory=dict)
    hypothesis_violations: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def overall_passed(self) -> bool:
        return all(c["verdict"] == "pass" for c in self.checks)

    @property
    def exit_code(self) -> int:
        if self.hypothesis_violations:
            return 3
        return 0 if self.overall_passed else 2

    def add_check(self, name: str, measured: float, bound: float,
                  slack: float, passed: bool):
        self.checks.append({
            "name": name,
            "measured": float(measured),
            "bound": float(bound),
            "slack": float(slack),
            "verdict": "pass" if passed else "fail",
        })

    def to_dict(self) -> dict:
        return {
            "schema": "suite_result/1",
            "suite": self.suite,
            "overall": "pass" if self.overall_passed else "fail",
            "exit_code": self.exit_code,
            "checks": self.checks,
            "hypothesis_violations": self.hypothesis_violations,
            "series": self.series,
            "metadata": self.metadata,
        }


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _space_from_config(cfg: dict) -> SpaceForm:
    spec = _g(cfg, "space", required=True)
    try:
        return space_from_dict(spec)
    except (KeyError, GeometryError) as exc:
        raise ConfigError(f"bad space spec: {exc}") from exc


def build_curve(space: SpaceForm, gen: dict, rng: np.random.Generator):
    """Construct a curve from a generator spec (provenance + parameters)."""
    prov = _g(gen, "provenance", required=True)
    n = int(_g(gen, "n", 4096))
    if prov == "circle":
        center = np.asarray(_g(gen, "center", space.origin()), dtype=float)
        return make_circle(space, center, float(_g(gen, "k0", required=True)),
                           n=n, phase=float(_g(gen, "phase", 0.0)))
    if prov == "lune":
        k0 = float(_g(gen, "k0", required=True))
        r = _g(gen, "r", "optimal")
        if r == "optimal":
            r = spindle_optimum(space, k0).r0
        return make_lune(space, k0, float(r), n=n)
    if prov == "support_function":
        harmonics = {int(m): tuple(map(float, ab))
                     for m, ab in _g(gen, "harmonics", {}).items()}
        return make_support_curve(float(_g(gen, "a0", 1.0)), harmonics,
                                  k0_target=float(_g(gen, "k0_target",
                                                     required=True)), n=n)
    if prov == "frame_ode":
        k0 = float(_g(gen, "k0", required=True))
        terms = [(int(m), float(a), float(ph))
                 for m, a, ph in _g(gen, "terms", [])]

        def profile(u):
            u = np.asarray(u, dtype=float)
            out = np.full_like(u, k0)
            for mm, amp, ph in terms:
                out = out + amp * np.cos(2.0 * np.pi * mm * u + ph)
            return out

        return make_frame_ode_curve(space, profile, n=n)
    if prov == "disc_intersection":
        centers = np.asarray(_g(gen, "centers", required=True), dtype=float)
        return make_disc_intersection(space, centers,
                                      float(_g(gen, "k0", required=True)), n=n)
    raise ConfigError(f"unknown generator provenance {prov!r}")


def _base_point(space: SpaceForm, curve, spec: dict):
    mode = _g(spec or {}, "mode", "hint")
    if mode == "hint":
        return curve.hint_center
    if mode == "point":
        return np.asarray(_g(spec, "coords", required=True), dtype=float)
    if mode == "offset":
        center = curve.hint_center
        dist = float(_g(spec, "distance", required=True))
        e1, _ = space.frame(center)
        return space.exp_map(center, dist * e1)
    raise ConfigError(f"unknown base point mode {mode!r}")


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _run_angle(config, result, rng):
    space = _space_from_config(config)
    tol = float(_g(_g(config, "tolerances", {}), "slack_tol", 1e-9))
    curve = build_curve(space, _g(config, "generator", required=True), rng)
    base = _base_point(space, curve, _g(config, "base_point", {}))
    try:
        rep = verify_angle_bound(curve, base, slack_tol=tol)
    except HypothesisViolation as exc:
        result.hypothesis_violations.append(str(exc))
        return
    result.add_check("angle_min_slack", rep.min_slack, -tol,
                     rep.min_slack + tol, rep.passed)
    idx = np.nonzero(rep.included)[0]
    result.series["angle"] = {
        "columns": ["s", "t", "phi", "bound", "slack"],
        "rows": [[float(rep.s[i]), float(rep.t[i]), float(rep.phi[i]),
                  rep.bound_cos, float(rep.slack[i])] for i in idx],
    }


def _run_width(config, result, rng):
    tol = float(_g(_g(config, "tolerances", {}), "margin_tol", 1e-7))
    curve_file = _g(config, "curve_file")
    if curve_file is not None:
        curve = load_curve(curve_file)
    else:
        space = _space_from_config(config)
        curve = build_curve(space, _g(config, "generator", required=True), rng)
    try:
        rep = layer_width(curve, margin_tol=tol)
    except HypothesisViolation as exc:
        result.hypothesis_violations.append(str(exc))
        return
    result.add_check("width_margin", rep.d, rep.d0, rep.margin, rep.passed)
    result.series["width"] = {
        "columns": ["r", "rho1", "d", "d0", "margin"],
        "rows": [[rep.r, rep.rho1, rep.d, rep.d0, rep.margin]],
    }
    result.metadata["layer_report"] = rep.to_dict()


def _run_spindle_table(config, result, rng):
    space = _space_from_config(config)
    spec = _g(config, "spindle", {})
    k0_values = [float(v) for v in _g(spec, "k0", [1.0])]
    rows = spindle_table_rows(space, k0_values,
                              r_count=int(_g(spec, "r_count", 33)))
    result.series["spindle"] = {
        "columns": ["space", "k1", "k0", "r", "rho", "d", "r0", "d0"],
        "rows": [[row[c] for c in
                  ("space", "k1", "k0", "r", "rho", "d", "r0", "d0")]
                 for row in rows],
    }
    for k0 in k0_values:
        opt = spindle_optimum(space, k0)
        r_num, d_num = numeric_spindle_optimum(space, k0)
        result.add_check(f"spindle_oracle_r0_k0={k0:g}", r_num, opt.r0,
                         1e-7 - abs(r_num - opt.r0),
                         abs(r_num - opt.r0) <= 1e-7)
        result.add_check(f"spindle_oracle_d0_k0={k0:g}", d_num, opt.d0,
                         1e-9 - abs(d_num - opt.d0),
                         abs(d_num - opt.d0) <= 1e-9)
        if space.kind.value != "flat":
            alt = spindle_max_width_alt(space, k0)
            result.add_check(f"spindle_alt_form_k0={k0:g}", alt, opt.d0,
                             1e-10 - abs(alt - opt.d0),
                             abs(alt - opt.d0) <= 1e-10)


def _run_warped(config, result, rng):
    spec = _g(config, "warped", required=True)
    family = _g(spec, "family", required=True)
    params = {k: float(v) for k, v in _g(spec, "params", {}).items()}
    metric = make_warped(family, T=float(_g(spec, "T", required=True)),
                         **params)
    comp = verify_circle_curvature_comparison(metric)
    result.add_check("mu_comparison_min_slack", comp.min_slack, -1e-9,
                     comp.min_slack + 1e-9, comp.passed)
    rho0 = float(_g(spec, "rho0", 0.8))
    strength = float(_g(spec, "strength", 0.05))
    count = int(_g(spec, "curves", 5))
    rows = []
    for i in range(count):
        harmonics = {}
        for j in (2, 3, 4):
            amp = strength * rho0 * rng.uniform(0.2, 1.0) / j ** 2
            phase = rng.uniform(0.0, 2.0 * np.pi)
            harmonics[j] = (amp * math.cos(phase), amp * math.sin(phase))
        curve = make_warped_curve(metric, rho0, harmonics)
        try:
            ver = verify_radial_bounds(metric, curve)
        except HypothesisViolation as exc:
            result.hypothesis_violations.append(f"curve {i}: {exc}")
            continue
        result.add_check(f"warped_angle_slack_{i}", ver.min_angle_slack,
                         -1e-9, ver.min_angle_slack + 1e-9, ver.angle_passed)
        result.add_check(f"warped_width_margin_{i}", ver.d, ver.d0,
                         ver.width_margin, ver.width_passed)
        rows.append([i, curve.kmin, ver.h, ver.min_angle_slack, ver.d,
                     ver.d0])
    if bool(_g(spec, "violating", False)):
        # deliberately eccentric curve whose curvature drops below the
        # comparison threshold; must be rejected, not judged
        bad = make_warped_curve(metric, rho0,
                                {2: (0.55 * rho0, 0.0)})
        try:
            verify_radial_bounds(metric, bad)
            result.add_check("violating_curve_rejected", 0.0, 1.0, -1.0,
                             False)
        except HypothesisViolation as exc:
            result.hypothesis_violations.append(f"violating curve: {exc}")
    result.series["warped"] = {
        "columns": ["index", "kmin", "h", "angle_slack", "d", "d0"],
        "rows": rows,
    }


def _run_sweep(config, result, rng):
    spec = _g(config, "sweep", {})
    k0 = float(_g(spec, "k0", 1.0))
    k1_values = [float(v) for v in
                 _g(spec, "k1", [0.5, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3])]
    flat_d0 = spindle_optimum(SpaceForm.flat(), k0).d0
    rows = []
    for kind in ("sphere", "hyperbolic"):
        for k1 in k1_values:
            if kind == "hyperbolic" and k1 >= k0:
                continue    # no closed circle of curvature k0 there
            space = SpaceForm.sphere(k1) if kind == "sphere" \
                else SpaceForm.hyperbolic(k1)
            d0 = spindle_optimum(space, k0).d0
            rows.append([kind, k1, d0, d0 - flat_d0])
        d_last = rows[-1][2]
        tol = float(_g(spec, "limit_tol", 1e-5))
        result.add_check(f"euclidean_limit_{kind}", d_last, flat_d0,
                         tol - abs(d_last - flat_d0),
                         abs(d_last - flat_d0) <= tol)
    result.series["width_sweep"] = {
        "columns": ["kind", "k1", "d0", "d0_minus_flat"],
        "rows": rows,
    }


_RUNNERS = {
    "angle": _run_angle,
    "width": _run_width,
    "spindle-table": _run_spindle_table,
    "warped": _run_warped,
    "sweep": _run_sweep,
}


def run(config: dict) -> SuiteResult:
    """Execute the selected suite(s) for a config document."""
    suite = _g(config, "suite", required=True)
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; valid: {SUITES}")
    seed = int(_g(config, "seed", 0))
    result = SuiteResult(suite=suite)
    result.metadata = {
        "config_hash": config_hash(config),
        "version": __version__,
        "seed": seed,
        "rng": "numpy.random.default_rng (PCG64)",
        "timestamp": None,
    }
    names = [s for s in ("angle", "width", "spindle-table", "warped", "sweep")
             if suite == "all" and s in _implied_suites(config)] \
        if suite == "all" else [suite]
    for name in names:
        rng = np.random.default_rng(seed)
        _RUNNERS[name](config, result, rng)
    result.metadata["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return result


def _implied_suites(config: dict):
    implied = []
    if "generator" in config:
        implied += ["angle", "width"]
    if "spindle" in config:
        implied.append("spindle-table")
    if "warped" in config:
        implied.append("warped")
    if "sweep" in config:
        implied.append("sweep")
    return implied


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def result_json(result: SuiteResult, drop_timestamp: bool = False) -> str:
    doc = result.to_dict()
    if drop_timestamp:
        doc["metadata"] = dict(doc["metadata"], timestamp=None)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return format(v, f".{PLOT_DIGITS}g")
    return str(v)


def emit_plot_data(result: SuiteResult, kind: str, out_path) -> str:
    """Write one series as CSV (header line, stable column order)."""
    if kind not in result.series:
        raise GeometryError(
            f"result has no series {kind!r}; available: "
            f"{sorted(result.series)}")
    series = result.series[kind]
    lines = [",".join(series["columns"])]
    for row in series["rows"]:
        lines.append(",".join(_csv_cell(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(out_path, "w") as fh:
        fh.write(text)
    return text
