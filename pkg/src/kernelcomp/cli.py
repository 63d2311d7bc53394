"""Batch experiment runner with reproducible seeds and bit-stable reports.

Every command resolves its parameters and tolerances against strict defaults,
derives all randomness from (seed, trial) substreams, and emits reports whose
bytes depend only on the config and seed: floats print at full precision,
keys are sorted, and wall time stays out of the files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .ball import br_experiment, inv_kernel_mult_norm, row_mult_norm
from .dbr import combo_to_poly, onb_defect, summation_partial, szego_residual
from .kernels import (
    KernelSpec,
    check_psd,
    eval_kernel,
    gram,
    sample_point_set,
)
from .operators import SpaceSpec, comp_matrix, mult_matrix, op_norm_lower, \
    weighted_comp_matrix
from .sampling import (
    random_ball_row_contraction,
    random_disk_symbol,
    random_kernel_combo,
)
from .series import (
    BallPoly,
    BallMap,
    DiskPoly,
    SelfMapDisk,
    blaschke_factor,
    poly_from_json_dict,
)

__all__ = ["main", "run_experiment", "ExperimentConfig", "ConfigError",
           "Report", "CheckRecord", "CLAIM_ANCHORS", "COMMANDS"]


class ConfigError(Exception):
    """Malformed or unknown experiment configuration."""


# registry of claim identifiers; every record cites one so reports can be
# grouped by the statement they exercise
CLAIM_ANCHORS = frozenset({
    "hardy-composition-bound",
    "inner-symbol-sharpness",
    "weighted-composition-contraction",
    "szego-identity-residual",
    "partial-sum-monotone",
    "partial-sum-defect",
    "bergman-composition-bound",
    "bergman-weighted-contraction",
    "reciprocal-weight-estimate",
    "coordinate-multiplier-contraction",
    "row-multiplier-bound",
    "inverse-kernel-multiplier-bound",
    "ball-composition-bound",
    "kernel-positivity",
    "product-map-unbounded-growth",
    "product-map-negativity",
    "product-map-saturation",
})


@dataclass
class CheckRecord:
    """One pass/fail line: measured value against bound plus tolerance."""

    description: str
    paper_anchor: str
    measured: float
    bound: float
    tolerance: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "description": self.description,
            "paper_anchor": self.paper_anchor,
            "measured": self.measured,
            "bound": self.bound,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def make_record(description: str, anchor: str, measured: float, bound: float,
                tolerance: float) -> CheckRecord:
    if anchor not in CLAIM_ANCHORS:
        raise ValueError(f"unknown claim anchor {anchor!r}")
    measured = float(measured)
    bound = float(bound)
    tolerance = float(tolerance)
    return CheckRecord(description=description, paper_anchor=anchor,
                       measured=measured, bound=bound, tolerance=tolerance,
                       passed=bool(measured <= bound + tolerance))


@dataclass
class Report:
    """Everything one run produced; wall time never reaches the files."""

    config: dict
    records: list
    trace: dict | None = None
    extras: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "version": __version__,
            "records": [r.to_json_dict() for r in self.records],
            "trace": self.trace,
            "extras": self.extras,
        }


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(float(x), ".17g")


def stable_json(obj) -> str:
    """Deterministic JSON: sorted keys, full-precision floats, no whitespace
    variation; the same value always serializes to the same bytes."""
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        items = []
        for k in sorted(obj):
            if not isinstance(k, str):
                raise TypeError("json object keys must be strings")
            items.append(f"{json.dumps(k, ensure_ascii=True)}:{stable_json(obj[k])}")
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(stable_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return "NaN"
        return format(x, ".17g")
    if isinstance(v, str):
        if "," in v or "\n" in v:
            raise ValueError("csv cells must not contain commas or newlines")
        return v
    raise TypeError(f"cannot place {type(v).__name__} in csv")


def report_csv(report: Report) -> str:
    if report.trace is not None:
        lines = [",".join(report.trace["columns"])]
        for row in report.trace["rows"]:
            lines.append(",".join(_csv_cell(v) for v in row))
    else:
        lines = ["description,paper_anchor,measured,bound,tolerance,pass"]
        for r in report.records:
            lines.append(",".join(_csv_cell(v) for v in (
                r.description, r.paper_anchor, r.measured, r.bound,
                r.tolerance, r.passed)))
    return "\n".join(lines) + "\n"


def render_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return stable_json(report.to_json_dict()) + "\n"
    if fmt == "csv":
        return report_csv(report)
    raise ConfigError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# input parsers


def _require_keys(obj: dict, required: set, optional: set, what: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{what} must be a json object")
    keys = set(obj)
    missing = required - keys
    extra = keys - required - optional
    if missing:
        raise ConfigError(f"{what} is missing keys {sorted(missing)}")
    if extra:
        raise ConfigError(f"{what} has unknown keys {sorted(extra)}")


def _as_complex(v, what: str) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"{what} must be a [re, im] pair")
    return complex(float(v[0]), float(v[1]))


def symbol_from_json(obj: dict) -> SelfMapDisk:
    """Disk symbols: explicit taylor coefficients, a disk automorphism
    factor, or a scaled monomial."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError("symbol must be an object with a 'type' key")
    kind = obj["type"]
    if kind == "taylor":
        _require_keys(obj, {"type", "coeffs"}, set(), "taylor symbol")
        coeffs = [_as_complex(c, "taylor coefficient") for c in obj["coeffs"]]
        return SelfMapDisk(DiskPoly(coeffs))
    if kind == "blaschke":
        _require_keys(obj, {"type", "a"}, {"tail_tol"}, "blaschke symbol")
        a = _as_complex(obj["a"], "blaschke parameter")
        return blaschke_factor(a, tail_tol=float(obj.get("tail_tol", 1e-13)))
    if kind == "monomial":
        _require_keys(obj, {"type", "degree"}, {"scale"}, "monomial symbol")
        scale = _as_complex(obj.get("scale", [1.0, 0.0]), "monomial scale")
        return SelfMapDisk(DiskPoly.monomial(int(obj["degree"]), scale))
    raise ConfigError(f"unknown symbol type {kind!r}")


def ballmap_from_json(obj: dict) -> BallMap:
    _require_keys(obj, {"dim", "coords"}, set(), "ball map")
    dim = int(obj["dim"])
    coords = []
    for c in obj["coords"]:
        p = poly_from_json_dict(c)
        if isinstance(p, DiskPoly):
            p = BallPoly(1, {(n,): v for n, v in enumerate(p.coeffs) if v != 0})
        coords.append(p)
    if len(coords) != dim:
        raise ConfigError("ball map needs one coordinate polynomial per dimension")
    return BallMap(coords)


def kernel_spec_from_json(obj: dict) -> KernelSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("kernel spec must be an object with a 'kind' key")
    kind = obj["kind"]
    if kind == "szego":
        _require_keys(obj, {"kind"}, set(), "szego spec")
        return KernelSpec.szego()
    if kind == "bergman":
        _require_keys(obj, {"kind", "alpha"}, set(), "bergman spec")
        return KernelSpec.bergman(float(obj["alpha"]))
    if kind == "dbr":
        _require_keys(obj, {"kind", "b"}, set(), "dbr spec")
        return KernelSpec.dbr(symbol_from_json(obj["b"]))
    if kind == "dbr_power":
        _require_keys(obj, {"kind", "b", "alpha"}, set(), "dbr_power spec")
        return KernelSpec.dbr_power(symbol_from_json(obj["b"]), int(obj["alpha"]))
    if kind == "ball":
        _require_keys(obj, {"kind", "dim", "alpha"}, set(), "ball spec")
        return KernelSpec.ball(int(obj["dim"]), float(obj["alpha"]))
    if kind == "ball_map":
        _require_keys(obj, {"kind", "b", "alpha"}, set(), "ball_map spec")
        return KernelSpec.ball_map(ballmap_from_json(obj["b"]), float(obj["alpha"]))
    raise ConfigError(f"unknown kernel kind {kind!r}")


# ---------------------------------------------------------------------------
# runners


H2 = SpaceSpec(1, 1.0)


def _disk_bound(center_modulus: float, alpha: float) -> float:
    return float(((1.0 + center_modulus) / (1.0 - center_modulus)) ** (alpha / 2.0))


def _hardy_trace_degrees(n: int) -> list:
    ds = {n, (3 * n) // 4}
    d = 1
    while d < n:
        ds.add(d)
        d *= 2
    return sorted(x for x in ds if 1 <= x <= n)


def run_hardy_bound(params: dict, tol: dict, seed: int):
    b = symbol_from_json(params["symbol"])
    n = int(params["section_degree"])
    if b.is_constant():
        c = abs(b.center)
        exact = float((1.0 - c * c) ** -0.5)
        bound = _disk_bound(c, 1.0)
        records = [make_record(
            "rank-one composition norm stays within the closed-form bound",
            "hardy-composition-bound", exact, bound, tol["bound_slack"])]
        trace = {"columns": ["N", "lower", "upper"], "rows": [[n, exact, bound]]}
        return records, trace, {}
    degrees = params["trace_degrees"]
    if degrees is None:
        degrees = _hardy_trace_degrees(n)
    nb = op_norm_lower(comp_matrix(b, H2, n), trace_degrees=degrees)
    records = [make_record(
        "certified lower bounds stay within the closed-form composition bound",
        "hardy-composition-bound", max(lo for _, lo in nb.trace), nb.upper,
        tol["bound_slack"])]
    if params["check_sharp"]:
        records.append(make_record(
            "final section closes the gap to the closed-form value",
            "inner-symbol-sharpness", nb.upper - nb.lower, 0.0,
            tol["sharp_gap"]))
    trace = {"columns": ["N", "lower", "upper"], "rows": nb.csv_rows()}
    return records, trace, {}


def run_theorem1(params: dict, tol: dict, seed: int):
    trials = int(params["trials"])
    records = []
    rows = []
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        b = random_disk_symbol(rng, int(params["symbol_degree_max"]),
                               float(params["boundary_max"]))
        combo = random_kernel_combo(rng, b, alpha=1,
                                    max_nodes=int(params["node_max"]),
                                    node_radius=float(params["node_radius"]))
        f = combo_to_poly(combo, int(params["combo_degree"]))
        section = weighted_comp_matrix(f, b, H2, int(params["section_degree"]))
        lower = op_norm_lower(section,
                              trace_degrees=[int(params["section_degree"])]).lower
        records.append(make_record(
            f"trial {t}: weighted section stays below the unit combo norm",
            "weighted-composition-contraction", lower, 1.0, tol["rel_slack"]))
        rows.append([t, lower, 1.0])
    trace = {"columns": ["trial", "lower", "bound"], "rows": rows}
    return records, trace, {}


def run_szego_identity(params: dict, tol: dict, seed: int):
    b = symbol_from_json(params["symbol"])
    degrees = [int(d) for d in params["degrees"]]
    if len(degrees) < 2 or sorted(degrees) != degrees:
        raise ConfigError("degrees must be at least two increasing values")
    rng = np.random.default_rng((seed, 0))
    pts = sample_point_set(rng, 1, float(params["point_radius"]),
                           int(params["point_count"]))
    residuals = []
    for d in degrees:
        onb = onb_defect(b, d, rank_tol=params["rank_tol"])
        residuals.append(szego_residual(onb, pts))
    records = [
        make_record("kernel identity residual at the largest section degree",
                    "szego-identity-residual", residuals[-1], 0.0,
                    tol["residual_max"]),
        make_record("residual does not grow from the smallest section degree",
                    "szego-identity-residual", residuals[-1] - residuals[0],
                    0.0, tol["monotone_slack"]),
    ]
    trace = {"columns": ["N", "residual"],
             "rows": [[d, r] for d, r in zip(degrees, residuals)]}
    return records, trace, {}


def run_summation(params: dict, tol: dict, seed: int):
    b = symbol_from_json(params["symbol"])
    mode_count = params["mode_count"]
    sp = summation_partial(b, int(params["section_degree"]),
                           mode_count=None if mode_count is None else int(mode_count),
                           test_degree=int(params["test_degree"]),
                           rank_tol=params["rank_tol"])
    worst_drop = 0.0
    worst_top = 0.0
    prev = None
    rows = []
    for k, s in enumerate(sp.partials):
        step = s if prev is None else s - prev
        lam_step = float(np.linalg.eigvalsh(step)[0])
        lam_top = float(np.linalg.eigvalsh(s)[-1])
        worst_drop = max(worst_drop, -lam_step)
        worst_top = max(worst_top, lam_top)
        rows.append([k, lam_top, sp.defects[k]])
        prev = s
    defect_rise = 0.0
    for a, bnext in zip(sp.defects, sp.defects[1:]):
        defect_rise = max(defect_rise, bnext - a)
    records = [
        make_record("partial sums increase in the positive order",
                    "partial-sum-monotone", worst_drop, 0.0,
                    tol["monotone_slack"]),
        make_record("partial sums stay dominated by the identity",
                    "partial-sum-monotone", worst_top, 1.0,
                    tol["upper_slack"]),
        make_record("identity defect at full mode count",
                    "partial-sum-defect", sp.defects[-1], 0.0,
                    tol["defect_max"]),
        make_record("identity defects do not increase with added modes",
                    "partial-sum-defect", defect_rise, 0.0,
                    tol["defect_monotone_slack"]),
    ]
    trace = {"columns": ["modes", "lambda_max", "defect"], "rows": rows}
    return records, trace, {}


def run_bergman_bound(params: dict, tol: dict, seed: int):
    alphas = [int(a) for a in params["alphas"]]
    trials = int(params["trials"])
    n = int(params["section_degree"])
    records = []
    rows = []
    for ai, alpha in enumerate(alphas):
        if alpha < 1:
            raise ConfigError("alphas must be integers at least 1")
        space = SpaceSpec(1, float(alpha))
        worst_gap = -math.inf
        worst_weighted = -math.inf
        for t in range(trials):
            rng = np.random.default_rng((seed, ai, t))
            b = random_disk_symbol(rng, int(params["symbol_degree_max"]),
                                   float(params["boundary_max"]))
            nb = op_norm_lower(comp_matrix(b, space, n), trace_degrees=[n])
            worst_gap = max(worst_gap, nb.lower - nb.upper)
            combo = random_kernel_combo(rng, b, alpha=alpha,
                                        max_nodes=int(params["node_max"]),
                                        node_radius=float(params["node_radius"]))
            f = combo_to_poly(combo, int(params["combo_degree"]))
            w = weighted_comp_matrix(f, b, space, n)
            lw = op_norm_lower(w, trace_degrees=[n]).lower
            worst_weighted = max(worst_weighted, lw)
            rows.append([alpha, t, nb.lower, nb.upper, lw])
        records.append(make_record(
            f"composition sections respect the closed-form bound at alpha={alpha}",
            "bergman-composition-bound", worst_gap, 0.0, tol["bound_slack"]))
        records.append(make_record(
            f"weighted sections stay below the unit combo norm at alpha={alpha}",
            "bergman-weighted-contraction", worst_weighted, 1.0,
            tol["rel_slack"]))
    trace = {"columns": ["alpha", "trial", "comp_lower", "comp_upper",
                         "weighted_lower"], "rows": rows}
    return records, trace, {}


def run_inf_estimate(params: dict, tol: dict, seed: int):
    b = symbol_from_json(params["symbol"])
    if b.is_constant():
        raise ConfigError("the estimate needs a non-constant symbol")
    n = int(params["section_degree"])
    grid = int(params["grid_size"])
    nb = op_norm_lower(comp_matrix(b, H2, n), trace_degrees=[n])
    rng = np.random.default_rng((seed, 0))
    centers = [0.0 + 0.0j]
    extra = int(params["family_size"]) - 1
    if extra > 0:
        pts = sample_point_set(rng, 1, float(params["family_radius"]), extra)
        centers.extend(complex(z) for z in pts.points[:, 0])
    theta = 2.0 * np.pi * np.arange(grid) / grid
    circle = np.exp(1j * theta)
    bz = b(circle)
    rows = []
    best = math.inf
    for w in centers:
        norm_w = math.sqrt(float(np.real(
            eval_kernel(KernelSpec.dbr(b), w, w))))
        fv = (1.0 - np.conj(b(w)) * bz) / (1.0 - np.conj(w) * circle)
        low = float(np.min(np.abs(fv)))
        est = norm_w / low
        best = min(best, est)
        rows.append([float(w.real), float(w.imag), norm_w, 1.0 / low, est])
    records = [make_record(
        "final section lower bound stays below the best reciprocal-weight estimate",
        "reciprocal-weight-estimate", nb.lower, best, tol["bound_slack"])]
    trace = {"columns": ["w_re", "w_im", "weight_norm", "inv_sup", "estimate"],
             "rows": rows}
    return records, trace, {}


def run_ball_lemma(params: dict, tol: dict, seed: int):
    alphas = [int(a) for a in params["alphas"]]
    maps = int(params["maps"])
    dim = int(params["dim"])
    n = int(params["section_degree"])
    records = []
    rows = []
    worst = {(a, key): -math.inf for a in alphas
             for key in ("psd", "coord", "margin", "inv")}
    for mi in range(maps):
        rng = np.random.default_rng((seed, mi))
        bmap = random_ball_row_contraction(rng, dim,
                                           int(params["coord_degree"]),
                                           float(params["row_target"]))
        for alpha in alphas:
            space = SpaceSpec(dim, float(alpha))
            spec = KernelSpec.ball_map(bmap, float(alpha))
            pts = sample_point_set(rng, dim, float(params["cert_radius"]),
                                   int(params["cert_points"]))
            cert = check_psd(gram(spec, pts))
            worst[(alpha, "psd")] = max(worst[(alpha, "psd")],
                                        -cert.min_eigenvalue - cert.tolerance)
            coord_top = -math.inf
            for coord in bmap.coords:
                lo = op_norm_lower(mult_matrix(coord, space, n),
                                   trace_degrees=[n]).lower
                coord_top = max(coord_top, lo)
            worst[(alpha, "coord")] = max(worst[(alpha, "coord")], coord_top)
            min_margin = math.inf
            for _ in range(int(params["row_points"])):
                wpt = sample_point_set(rng, dim, float(params["row_radius"]), 1)
                rc = row_mult_norm(bmap, float(alpha), wpt.points[0], n)
                min_margin = min(min_margin, rc.margin)
            worst[(alpha, "margin")] = max(worst[(alpha, "margin")], -min_margin)
            inv = inv_kernel_mult_norm(bmap, float(alpha), n,
                                       tail_tol=float(params["inv_tail_tol"]))
            worst[(alpha, "inv")] = max(worst[(alpha, "inv")],
                                        inv.lower - inv.upper)
            rows.append([mi, alpha, cert.min_eigenvalue, coord_top,
                         min_margin, inv.lower, inv.upper])
    for alpha in alphas:
        records.append(make_record(
            f"map kernels certify positive for row contractions at alpha={alpha}",
            "kernel-positivity", worst[(alpha, "psd")], 0.0, 0.0))
        records.append(make_record(
            f"coordinate multiplier sections are contractions at alpha={alpha}",
            "coordinate-multiplier-contraction", worst[(alpha, "coord")], 1.0,
            tol["coord_slack"]))
        records.append(make_record(
            f"row multiplier margins stay nonnegative at alpha={alpha}",
            "row-multiplier-bound", worst[(alpha, "margin")], 0.0,
            tol["margin_slack"]))
        records.append(make_record(
            f"inverse-kernel weight sections respect the closed form at alpha={alpha}",
            "inverse-kernel-multiplier-bound", worst[(alpha, "inv")], 0.0,
            tol["inv_slack"]))
    trace = {"columns": ["map", "alpha", "cert_min_eig", "coord_lower",
                         "row_margin", "inv_lower", "inv_upper"], "rows": rows}
    return records, trace, {}


def run_ball_bound(params: dict, tol: dict, seed: int):
    alphas = [int(a) for a in params["alphas"]]
    maps = int(params["maps"])
    dim = int(params["dim"])
    n = int(params["section_degree"])
    records = []
    rows = []
    for alpha in alphas:
        worst = -math.inf
        space = SpaceSpec(dim, float(alpha))
        for mi in range(maps):
            rng = np.random.default_rng((seed, mi))
            bmap = random_ball_row_contraction(rng, dim,
                                               int(params["coord_degree"]),
                                               float(params["row_target"]))
            beta = float(np.linalg.norm(bmap.center))
            bound = _disk_bound(beta, float(alpha))
            lo = op_norm_lower(comp_matrix(bmap, space, n),
                               trace_degrees=[n]).lower
            worst = max(worst, lo - bound)
            rows.append([alpha, mi, lo, bound])
        records.append(make_record(
            f"composition sections respect the closed-form bound at alpha={alpha}",
            "ball-composition-bound", worst, 0.0, tol["bound_slack"]))
    trace = {"columns": ["alpha", "map", "comp_lower", "bound"], "rows": rows}
    return records, trace, {}


def run_br(params: dict, tol: dict, seed: int):
    r_values = [float(r) for r in params["r_values"]]
    n = int(params["section_degree"])
    step = int(params["trace_step"])
    degrees = sorted(set(range(0, n + 1, step)) | {n})
    records = []
    rows = []
    certificates = []
    for idx, r in enumerate(r_values):
        res = br_experiment(
            r, alpha=float(params["alpha"]), section_degree=n,
            trace_degrees=degrees,
            witness_budget=int(params["witness_budget"]),
            set_size=int(params["set_size"]), radius=float(params["radius"]),
            seed=(seed, idx))
        rows.extend([[res.r, nn, lo, res.verdict(), res.min_eigenvalue(), seed]
                     for nn, lo in res.bracket.trace])
        cert = res.witness[1] if res.witness is not None else res.probe
        certificates.append(cert.to_json_dict())
        if r == 1.0:
            diffs = [b2 - b1 for (_, b1), (_, b2)
                     in zip(res.bracket.trace, res.bracket.trace[1:])]
            records.append(make_record(
                "degenerate parameter: lower bounds strictly increase",
                "product-map-unbounded-growth", -min(diffs),
                -float(params["strict_increase_min"]), 0.0))
            records.append(make_record(
                "degenerate parameter: final lower bound beats the frozen threshold",
                "product-map-unbounded-growth",
                float(params["growth_threshold"]) - res.bracket.lower, 0.0, 0.0))
        else:
            last = res.bracket.trace[-1][1]
            prev = res.bracket.trace[-2][1]
            records.append(make_record(
                f"contractive parameter r={r}: trace saturates",
                "product-map-saturation", abs(last - prev), 0.0,
                tol["saturation_tol"]))
        if r >= float(params["negative_expect_min_r"]):
            measured = res.witness[1].min_eigenvalue if res.witness else 1.0
            records.append(make_record(
                f"negativity witness found at r={r}",
                "product-map-negativity", measured,
                -float(tol["witness_level"]), 0.0))
        else:
            records.append(make_record(
                f"no negativity witness within budget at r={r}",
                "product-map-negativity",
                0.0 if res.witness is None else 1.0, 0.0, 0.0))
    trace = {"columns": ["r", "N", "comp_lower", "psd_verdict",
                         "min_eigenvalue", "seed"], "rows": rows}
    return records, trace, {"certificates": certificates}


def run_psd(params: dict, tol: dict, seed: int):
    spec = kernel_spec_from_json(params["spec"])
    rng = np.random.default_rng((seed, 0))
    pts = sample_point_set(rng, spec.space_dim, float(params["radius"]),
                           int(params["point_count"]))
    cert = check_psd(gram(spec, pts))
    cert.seed = seed
    expect = params["expect"]
    if expect == "psd":
        records = [make_record(
            "sampled Gram certifies positive semidefinite",
            "kernel-positivity", -cert.min_eigenvalue, 0.0, cert.tolerance)]
    elif expect == "negative":
        records = [make_record(
            "sampled Gram certifies negative",
            "kernel-positivity", cert.min_eigenvalue, -cert.tolerance, 0.0)]
    elif expect == "any":
        rec = make_record("sampled Gram verdict recorded", "kernel-positivity",
                          cert.min_eigenvalue, cert.min_eigenvalue, 0.0)
        records = [rec]
    else:
        raise ConfigError("expect must be one of psd, negative, any")
    return records, None, {"certificate": cert.to_json_dict()}


# ---------------------------------------------------------------------------
# registry and entry point


@dataclass(frozen=True)
class Command:
    name: str
    description: str
    defaults: dict
    tol_defaults: dict
    runner: object


_BLASCHKE_HALF = {"type": "blaschke", "a": [0.5, 0.0], "tail_tol": 1e-13}
_SQUARE = {"type": "monomial", "degree": 2, "scale": [1.0, 0.0]}

COMMANDS = {
    c.name: c for c in [
        Command(
            "hardy-bound",
            "composition sections against the closed-form norm bound",
            {"symbol": _BLASCHKE_HALF, "section_degree": 256,
             "trace_degrees": None, "check_sharp": True},
            {"bound_slack": 1e-9, "sharp_gap": 1e-2},
            run_hardy_bound),
        Command(
            "theorem1",
            "weighted composition sections against unit-norm kernel combos",
            {"trials": 100, "symbol_degree_max": 4, "boundary_max": 0.95,
             "node_max": 5, "node_radius": 0.6, "section_degree": 32,
             "combo_degree": 72},
            {"rel_slack": 1e-8},
            run_theorem1),
        Command(
            "szego-identity",
            "orthonormal modes reproduce the kernel identity",
            {"symbol": _SQUARE, "degrees": [16, 64], "point_count": 50,
             "point_radius": 0.5, "rank_tol": None},
            {"residual_max": 1e-6, "monotone_slack": 0.0},
            run_szego_identity),
        Command(
            "summation",
            "mode-wise partial sums resolve the identity",
            {"symbol": _SQUARE, "section_degree": 64, "test_degree": 8,
             "mode_count": None, "rank_tol": None},
            {"monotone_slack": 1e-10, "upper_slack": 1e-8,
             "defect_max": 1e-5, "defect_monotone_slack": 1e-10},
            run_summation),
        Command(
            "bergman-bound",
            "weighted-space composition and weighted sections at integer alpha",
            {"alphas": [2, 3], "trials": 20, "symbol_degree_max": 4,
             "boundary_max": 0.95, "node_max": 3, "node_radius": 0.5,
             "section_degree": 48, "combo_degree": 72},
            {"bound_slack": 1e-9, "rel_slack": 1e-8},
            run_bergman_bound),
        Command(
            "inf-estimate",
            "norm lower bounds against reciprocal-weight upper estimates",
            {"symbol": _BLASCHKE_HALF, "section_degree": 128,
             "family_size": 5, "family_radius": 0.5, "grid_size": 4096},
            {"bound_slack": 1e-6},
            run_inf_estimate),
        Command(
            "ball-lemma",
            "row contraction consequences: positivity, contractive "
            "coordinates, row margins, inverse-kernel weights",
            {"maps": 10, "alphas": [1, 2], "dim": 2, "coord_degree": 2,
             "row_target": 0.9, "section_degree": 8, "row_points": 10,
             "row_radius": 0.6, "cert_points": 40, "cert_radius": 0.6,
             "inv_tail_tol": 1e-10},
            {"coord_slack": 1e-8, "margin_slack": 1e-8, "inv_slack": 1e-9},
            run_ball_lemma),
        Command(
            "ball-bound",
            "ball composition sections against the closed-form bound",
            {"maps": 10, "alphas": [1, 2], "dim": 2, "coord_degree": 2,
             "row_target": 0.9, "section_degree": 8},
            {"bound_slack": 1e-9},
            run_ball_bound),
        Command(
            "br",
            "product-map experiment: growth traces and positivity scans",
            {"r_values": [0.5, 0.95, 1.0], "alpha": 1.0,
             "section_degree": 60, "trace_step": 4, "witness_budget": 10000,
             "set_size": 8, "radius": 0.95, "growth_threshold": 3.353367,
             "negative_expect_min_r": 0.75, "strict_increase_min": 1e-12},
            {"witness_level": 1e-6, "saturation_tol": 1e-3},
            run_br),
        Command(
            "psd",
            "one-shot positivity certificate for a kernel spec",
            {"spec": {"kind": "szego"}, "point_count": 50, "radius": 0.95,
             "expect": "psd"},
            {},
            run_psd),
    ]
}


@dataclass
class ExperimentConfig:
    name: str
    params: dict
    seed: int
    tolerances: dict
    output_path: str | None = None

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        _require_keys(obj, {"name"},
                      {"params", "seed", "tolerances", "output_path"},
                      "config")
        name = obj["name"]
        if name not in COMMANDS:
            raise ConfigError(
                f"unknown experiment {name!r}; see 'kernelcomp list'")
        cmd = COMMANDS[name]
        params = dict(cmd.defaults)
        for k, v in (obj.get("params") or {}).items():
            if k not in cmd.defaults:
                raise ConfigError(f"unknown parameter {k!r} for {name}")
            params[k] = v
        tolerances = dict(cmd.tol_defaults)
        for k, v in (obj.get("tolerances") or {}).items():
            if k not in cmd.tol_defaults:
                raise ConfigError(f"unknown tolerance {k!r} for {name}")
            tolerances[k] = float(v)
        seed = obj.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        out = obj.get("output_path")
        if out is not None and not isinstance(out, str):
            raise ConfigError("output_path must be a string")
        return cls(name=name, params=params, seed=seed,
                   tolerances=tolerances, output_path=out)


def run_experiment(cfg: ExperimentConfig) -> Report:
    cmd = COMMANDS[cfg.name]
    start = time.perf_counter()
    records, trace, extras = cmd.runner(cfg.params, cfg.tolerances, cfg.seed)
    wall = time.perf_counter() - start
    # the config echo deliberately omits output_path so identical experiments
    # emit identical bytes regardless of where they are written
    config_echo = {"name": cfg.name, "params": cfg.params, "seed": cfg.seed,
                   "tolerances": cfg.tolerances}
    return Report(config=config_echo, records=records, trace=trace,
                  extras=extras, wall_time=wall)


def _print_listing(stream) -> None:
    for name in sorted(COMMANDS):
        cmd = COMMANDS[name]
        print(f"{name}: {cmd.description}", file=stream)
        print(f"  params     {stable_json(cmd.defaults)}", file=stream)
        print(f"  tolerances {stable_json(cmd.tol_defaults)}", file=stream)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kernelcomp",
        description="reproducible kernel and composition-operator experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run one experiment from a json config")
    runp.add_argument("--config", required=True, help="path to a json config")
    runp.add_argument("--seed", type=int, default=None,
                      help="override the config seed")
    runp.add_argument("--out", default=None,
                      help="override the config output path")
    runp.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_parser("list", help="list experiments with defaults")
    args = parser.parse_args(argv)

    if args.command == "list":
        _print_listing(sys.stdout)
        return 0

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        cfg = ExperimentConfig.from_dict(raw)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be a nonnegative integer")
            cfg.seed = args.seed
        if args.out is not None:
            cfg.output_path = args.out
        report = run_experiment(cfg)
        payload = render_report(report, args.format)
        if cfg.output_path is not None:
            with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
            summary_stream = sys.stdout
            print(f"report written to {cfg.output_path}", file=summary_stream)
        else:
            sys.stdout.write(payload)
            summary_stream = sys.stderr
        for r in report.records:
            tag = "PASS" if r.passed else "FAIL"
            print(f"[{tag}] {r.description} "
                  f"(measured={r.measured:.6g}, bound={r.bound:.6g}, "
                  f"tol={r.tolerance:.3g})", file=summary_stream)
        passed = sum(1 for r in report.records if r.passed)
        print(f"{cfg.name}: {passed}/{len(report.records)} checks passed "
              f"in {report.wall_time:.2f} s", file=summary_stream)
        return 0 if report.all_pass() else 1
    except (ConfigError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
