"""Several-variable checks: row multipliers, inverse-kernel weights, and the
degenerate product map.

The product map (z1, z2) -> (2 r z1 z2, 0) is the boundary case of the theory:
its composition sections stay bounded for r < 1 and blow up at r = 1, and the
associated kernel loses positivity once r exceeds the multiplier norm
threshold of z1 z2, so both certified growth and certified negativity are
observable at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import (
    KernelSpec,
    PointSet,
    PositivityCertificate,
    check_psd,
    find_negative_witness,
    gram,
    sample_point_set,
    seed_tuple,
)
from .operators import NormBound, SpaceSpec, comp_matrix, mult_matrix, op_norm_lower
from .series import BallMap, BallPoly

__all__ = [
    "RowCheckResult",
    "BrResult",
    "row_mult_norm",
    "inv_kernel_mult_norm",
    "br_map",
    "br_experiment",
]


@dataclass
class RowCheckResult:
    """Row multiplier evidence at a point w.

    The row operator is sum_i conj(b_i(w)) M_{b_i}; when the map kernel is
    positive its norm is at most |b(w)|, so the margin bound - lower must be
    nonnegative up to rounding.
    """

    w: np.ndarray
    row_norm_lower: float
    bound: float
    margin: float


def row_mult_norm(b: BallMap, alpha: float, w, col_degree: int) -> RowCheckResult:
    """Certified lower bound for the row multiplier norm at w."""
    space = SpaceSpec(b.dim, float(alpha))
    wv = np.atleast_1d(np.asarray(w, dtype=complex))
    if wv.size != b.dim:
        raise ValueError("w must have one coordinate per map component")
    if float(np.linalg.norm(wv)) >= 1.0:
        raise ValueError("w must lie strictly inside the ball")
    bw = np.array([c(wv) for c in b.coords], dtype=complex)
    row_degree = col_degree + b.degree()
    acc = None
    for i, coord in enumerate(b.coords):
        block = mult_matrix(coord, space, col_degree, row_degree=row_degree).entries
        term = np.conj(bw[i]) * block
        acc = term if acc is None else acc + term
    acc = acc[np.any(acc != 0, axis=1)]
    sigma = float(np.linalg.svd(acc, compute_uv=False)[0]) if acc.size else 0.0
    bound = float(np.linalg.norm(bw))
    return RowCheckResult(w=wv, row_norm_lower=sigma, bound=bound,
                          margin=bound - sigma)


def inv_kernel_mult_norm(b: BallMap, alpha: float, col_degree: int,
                         tail_tol: float = 1e-10,
                         max_terms: int = 2000) -> NormBound:
    """Certified bracket for the multiplier (1 - <b(z), b(0)>) ** (-alpha).

    The weight expands as sum_k rising(alpha, k) / k! * s(z)^k with
    s(z) = <b(z), b(0)>; since |s| <= |b(0)| < 1 on the ball, the series is
    truncated once a geometric tail estimate drops below tail_tol.  The upper
    bound (1 - |b(0)|) ** (-alpha) comes with kernel positivity.
    """
    alpha = float(alpha)
    space = SpaceSpec(b.dim, alpha)
    center = b.center
    beta = float(np.linalg.norm(center))
    upper = float((1.0 - beta) ** (-alpha))
    s = BallPoly.zero(b.dim)
    for coord, c0 in zip(b.coords, center):
        s = s + np.conj(c0) * coord
    weight = BallPoly.constant(b.dim, 1.0)
    if beta > 0.0:
        term_poly = BallPoly.constant(b.dim, 1.0)
        coeff = 1.0
        k = 0
        while True:
            k += 1
            coeff *= (alpha + k - 1) / k
            term_poly = term_poly * s
            weight = weight + coeff * term_poly
            # remaining terms are dominated by a geometric series once the
            # term ratio beta * (alpha + k) / (k + 1) falls below 1
            ratio = beta * (alpha + k) / (k + 1)
            head = coeff * beta**k
            if ratio < 1.0 and head * ratio / (1.0 - ratio) <= tail_tol:
                break
            if k >= max_terms:
                raise ValueError(
                    "weight series needs more terms than allowed; "
                    "increase max_terms or loosen tail_tol"
                )
    section = mult_matrix(weight, space, col_degree)
    bracket = op_norm_lower(section, trace_degrees=[col_degree])
    bracket.upper = upper
    return bracket


def br_map(r: float) -> BallMap:
    """The two-variable product map (z1, z2) -> (2 r z1 z2, 0)."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    first = BallPoly(2, {(1, 1): 2.0 * float(r)})
    return BallMap([first, BallPoly.zero(2)])


@dataclass
class BrResult:
    """Outcome of the product-map experiment at one parameter value."""

    r: float
    alpha: float
    bracket: NormBound
    witness: tuple[PointSet, PositivityCertificate] | None
    probe: PositivityCertificate
    seed: object
    budget: int
    set_size: int
    radius: float

    def verdict(self) -> str:
        if self.witness is not None:
            return "certified-negative"
        return f"no-counterexample-at-budget-{self.budget}"

    def min_eigenvalue(self) -> float:
        """Witness eigenvalue when negative, else the trial-0 probe value."""
        if self.witness is not None:
            return self.witness[1].min_eigenvalue
        return self.probe.min_eigenvalue

    def csv_rows(self) -> list:
        verdict = self.verdict()
        lam = self.min_eigenvalue()
        label = "-".join(str(s) for s in seed_tuple(self.seed))
        return [
            [self.r, n, lo, verdict, lam, label]
            for n, lo in self.bracket.trace
        ]


def br_experiment(r: float, *, alpha: float = 1.0, section_degree: int = 60,
                  trace_degrees=None, witness_budget: int = 10000,
                  set_size: int = 8, radius: float = 0.95,
                  seed=0) -> BrResult:
    """Growth trace and positivity scan for the product map at parameter r.

    The composition section trace certifies norm growth (strictly increasing
    and unbounded at r = 1, saturating for r < 1); the randomized scan hunts
    for a point set whose map kernel Gram fails positivity.  At r = 0 the map
    is constant and the composition operator has norm exactly 1, so the trace
    is reported flat without building sections.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    alpha = float(alpha)
    b = br_map(r)
    if trace_degrees is None:
        trace_degrees = sorted(set(range(0, section_degree + 1, 4))
                               | {section_degree})
    if r == 0.0:
        bracket = NormBound(lower=1.0, upper=1.0, col_degree=section_degree,
                            trace=[(int(d), 1.0) for d in sorted(trace_degrees)])
    else:
        section = comp_matrix(b, SpaceSpec(2, alpha), section_degree)
        bracket = op_norm_lower(section, trace_degrees=trace_degrees)
    spec = KernelSpec.ball_map(b, alpha)
    witness = find_negative_witness(spec, seed=seed, radius=radius,
                                    set_size=set_size, budget=witness_budget)
    probe_rng = np.random.default_rng(seed_tuple(seed) + (0,))
    probe_pts = sample_point_set(probe_rng, 2, radius, set_size)
    probe = check_psd(gram(spec, probe_pts))
    probe.seed = seed
    return BrResult(r=float(r), alpha=alpha, bracket=bracket, witness=witness,
                    probe=probe, seed=seed, budget=witness_budget,
                    set_size=set_size, radius=radius)
