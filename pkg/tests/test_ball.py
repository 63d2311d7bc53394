"""Row multiplier checks, inverse-kernel weights, and the product-map study."""

import math

import numpy as np
import pytest

from kernelcomp.ball import (
    br_experiment,
    br_map,
    inv_kernel_mult_norm,
    row_mult_norm,
)
from kernelcomp.operators import SpaceSpec, comp_matrix, op_norm_lower
from kernelcomp.sampling import random_ball_row_contraction
from kernelcomp.series import BallMap, BallPoly

rising = lambda a, k: math.gamma(a + k) / math.gamma(a)


def test_row_mult_norm_identity_coordinate():
    # dim-1 map b(z) = z: the row operator at w is conj(w) times the shift,
    # whose section norm is exactly |w|
    b = BallMap([BallPoly(1, {(1,): 1.0})])
    out = row_mult_norm(b, 1.0, 0.6, 12)
    assert out.bound == pytest.approx(0.6, abs=1e-15)
    assert abs(out.margin) <= 1e-12
    assert out.row_norm_lower <= out.bound + 1e-12


def test_row_mult_norm_two_coordinates():
    half = BallPoly(2, {(1, 0): 0.5})
    other = BallPoly(2, {(0, 1): 0.5})
    b = BallMap([half, other])
    w = np.array([0.4, 0.2])
    out = row_mult_norm(b, 2.0, w, 8)
    assert out.bound == pytest.approx(np.linalg.norm([0.2, 0.1]), rel=1e-13)
    assert out.margin >= -1e-10


def test_row_mult_norm_rejects_outside_point():
    b = BallMap([BallPoly(1, {(1,): 0.5})])
    with pytest.raises(ValueError):
        row_mult_norm(b, 1.0, 1.2, 8)


def test_inv_kernel_weight_trivial_when_centered():
    # b(0) = 0 makes the weight identically one
    b = BallMap([BallPoly(2, {(1, 1): 0.5}), BallPoly(2, {})])
    out = inv_kernel_mult_norm(b, 2.0, 6)
    assert out.lower == pytest.approx(1.0, abs=1e-12)
    assert out.upper == pytest.approx(1.0, abs=1e-12)


def test_inv_kernel_weight_brackets_closed_form():
    # dim-1 symbol with b(0) = 1/2: closed form (1 - 1/2)^(-alpha)
    b = BallMap([BallPoly(1, {(0,): 0.5, (1,): 0.4})])
    for alpha in (1.0, 2.0):
        out = inv_kernel_mult_norm(b, alpha, 24)
        assert out.upper == pytest.approx(2.0**alpha, rel=1e-10)
        assert out.lower <= out.upper + 1e-9
        # the constant coefficient of the weight alone gives a lower bound
        assert out.lower >= (1.0 - 0.25) ** (-alpha) - 1e-9


def test_inv_kernel_weight_respects_term_budget():
    b = BallMap([BallPoly(1, {(0,): 0.9})])
    with pytest.raises(ValueError):
        inv_kernel_mult_norm(b, 1.0, 4, tail_tol=1e-300, max_terms=3)


def test_br_map_shape_and_values():
    bm = br_map(0.75)
    assert bm.dim == 2
    z = np.array([0.5, 0.4])
    vals = bm(z)
    assert vals.shape == (2,)
    assert vals[0] == pytest.approx(2 * 0.75 * 0.5 * 0.4, rel=1e-15)
    assert vals[1] == 0.0
    with pytest.raises(ValueError):
        br_map(1.2)
    with pytest.raises(ValueError):
        br_map(-0.1)


def test_br_composition_trace_matches_closed_form():
    # columns for (a, 0) map to single monomials (2r z1 z2)^a, which are
    # mutually orthogonal, so the section norm is the best column ratio:
    # (2r)^a a! / sqrt((2a)!)
    r = 1.0
    sec = comp_matrix(br_map(r), SpaceSpec(2, 1.0), 12)
    bound = op_norm_lower(sec, trace_degrees=[12])
    best = max((2 * r) ** a * math.factorial(a) / math.sqrt(math.factorial(2 * a))
               for a in range(13))
    assert bound.lower == pytest.approx(best, rel=1e-12)


def test_br_experiment_flat_at_zero():
    out = br_experiment(0.0, section_degree=8, witness_budget=5, set_size=4)
    values = [v for _, v in out.bracket.trace]
    assert values == [1.0] * len(values)
    assert out.verdict() == "no-counterexample-at-budget-5"
    assert out.witness is None
    assert out.probe is not None


def test_br_experiment_saturates_below_half_root_two():
    out = br_experiment(0.5, section_degree=24, witness_budget=50,
                        set_size=6, seed=3)
    values = [v for _, v in out.bracket.trace]
    assert abs(values[-1] - values[-2]) <= 1e-6
    assert out.witness is None
    assert out.min_eigenvalue() > -1e-10


def test_br_experiment_finds_negative_witness():
    out = br_experiment(0.95, section_degree=8, witness_budget=50,
                        set_size=8, radius=0.95, seed=0)
    assert out.verdict() == "certified-negative"
    assert out.witness is not None
    _, cert = out.witness
    assert cert.min_eigenvalue < -1e-6
    assert out.min_eigenvalue() == cert.min_eigenvalue


def test_br_experiment_growth_at_one():
    out = br_experiment(1.0, section_degree=40, trace_degrees=[8, 16, 24, 32, 40],
                        witness_budget=5, set_size=4, seed=1)
    values = [v for _, v in out.bracket.trace]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 3.35
    assert out.bracket.upper is None


def test_br_experiment_rejects_bad_r():
    with pytest.raises(ValueError):
        br_experiment(1.5)


def test_br_csv_rows_shape():
    out = br_experiment(0.5, section_degree=8, witness_budget=5, set_size=4,
                        seed=(7, 2))
    rows = out.csv_rows()
    assert all(len(row) == 6 for row in rows)
    assert rows[0][0] == 0.5
    assert rows[-1][1] == 8
    assert rows[0][5] == "7-2"


def test_random_ball_row_contraction_margins():
    rng = np.random.default_rng(41)
    for _ in range(5):
        b = random_ball_row_contraction(rng, dim=2, coord_degree=2,
                                        row_target=0.9)
        assert b.dim == 2
        assert b.sup_check.max_modulus <= 1.0 + 1e-9
        w = np.array([0.3, -0.25])
        for alpha in (1.0, 2.0):
            out = row_mult_norm(b, alpha, w, 8)
            assert out.margin >= -1e-8


def test_random_ball_row_contraction_coordinate_sections():
    rng = np.random.default_rng(42)
    b = random_ball_row_contraction(rng, dim=2, coord_degree=2, row_target=0.9)
    space = SpaceSpec(2, 1.0)
    from kernelcomp.operators import mult_matrix

    for coord in b.coords:
        if not coord.terms:
            continue
        sec = mult_matrix(coord, space, 6)
        assert op_norm_lower(sec).lower <= 1.0 + 1e-8
