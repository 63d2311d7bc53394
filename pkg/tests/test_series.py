"""Polynomial types, circle-sampling transforms, and admission checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kernelcomp.series import (
    BallMap,
    BallPoly,
    DiskPoly,
    ParameterError,
    SelfMapDisk,
    SingularSymbolError,
    blaschke_factor,
    compose,
    h2_norm,
    inf_modulus_circle,
    poly_from_json_dict,
    reciprocal,
    sup_norm_circle,
)


def test_disk_poly_eval_matches_term_sum():
    # oracle: evaluate term by term with plain python powers
    rng = np.random.default_rng(1)
    c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    p = DiskPoly(c)
    for z in [0.3 + 0.2j, -0.7j, 0.99, 0.0]:
        direct = sum(c[n] * z**n for n in range(9))
        assert abs(p(z) - direct) <= 1e-12 * max(1.0, abs(direct))


def test_disk_poly_arithmetic_and_degree():
    p = DiskPoly([1.0, 2.0])
    q = DiskPoly([0.0, 0.0, 3.0])
    assert (p + q).degree() == 2
    assert (p * q).degree() == 3
    assert (2.0 * p).coeffs[1] == 4.0
    assert (p**3).degree() == 3
    assert DiskPoly([0.0]).degree() == 0
    assert DiskPoly([1.0, 0.0, 0.0]).degree() == 0


def test_disk_poly_rejects_bad_coefficients():
    with pytest.raises(ValueError):
        DiskPoly([])
    with pytest.raises(ValueError):
        DiskPoly([1.0, np.inf])
    with pytest.raises(ValueError):
        DiskPoly([np.nan])


def test_ball_poly_eval_matches_term_sum():
    p = BallPoly(2, {(1, 1): 2.0, (0, 3): 1j, (0, 0): -0.5})
    z = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    direct = 2.0 * z[0] * z[1] + 1j * z[1] ** 3 - 0.5
    assert abs(p(z) - direct) <= 1e-14
    batch = np.stack([z, 0.5 * z])
    vals = p(batch)
    assert vals.shape == (2,)
    assert abs(vals[0] - direct) <= 1e-14


def test_ball_poly_drops_zero_terms_and_validates():
    p = BallPoly(2, {(1, 0): 0.0, (0, 1): 1.0})
    assert (1, 0) not in p.terms
    with pytest.raises(ValueError):
        BallPoly(2, {(1,): 1.0})
    with pytest.raises(ValueError):
        BallPoly(2, {(-1, 0): 1.0})


def test_poly_json_round_trip_and_golden_shape():
    p = DiskPoly([1.0, 0.0, 2.0j])
    d = p.to_json_dict()
    assert d == {"dim": 1, "terms": [[[0], [1.0, 0.0]], [[2], [0.0, 2.0]]]}
    q = poly_from_json_dict(d)
    assert np.array_equal(q.coeffs, p.coeffs)

    bp = BallPoly(2, {(0, 2): 1.0, (1, 1): 2.0, (2, 0): 3.0})
    d2 = bp.to_json_dict()
    # graded lexicographic: (2,0) then (1,1) then (0,2)
    assert [t[0] for t in d2["terms"]] == [[2, 0], [1, 1], [0, 2]]
    bq = poly_from_json_dict(d2)
    assert bq.terms == bp.terms


def test_h2_norm_against_circle_quadrature():
    # oracle: sup over radii of the quadrature mean of |f|^2 on the r-circle;
    # the sup over r < 1 recovers the coefficient norm
    rng = np.random.default_rng(2)
    c = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    f = DiskPoly(c)
    best = 0.0
    for r in (0.9, 0.99, 0.999, 0.9999, 0.99999):
        zs = r * np.exp(2j * np.pi * np.arange(4096) / 4096)
        best = max(best, float(np.sqrt(np.mean(np.abs(f(zs)) ** 2))))
    val = h2_norm(f)
    assert abs(val - best) <= 1e-3 * val


def test_sup_and_inf_modulus_on_circle():
    f = DiskPoly([0.0, 1.0])
    assert sup_norm_circle(f, 64) == pytest.approx(1.0, abs=1e-15)
    assert inf_modulus_circle(f, 64) == pytest.approx(1.0, abs=1e-15)
    g = DiskPoly([1.0, 0.5])
    assert sup_norm_circle(g, 4096) == pytest.approx(1.5, abs=1e-6)
    assert inf_modulus_circle(g, 4096) == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(ParameterError):
        sup_norm_circle(f, 8)


def test_blaschke_factor_matches_rational_function():
    a = 0.5
    b = blaschke_factor(a, tail_tol=1e-13)
    assert b.degree() == 44
    assert b.center == pytest.approx(0.5)
    rng = np.random.default_rng(3)
    for _ in range(100):
        z = (rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform()))
        exact = (z + a) / (1 + np.conj(a) * z)
        assert abs(b(z) - exact) <= 2e-13
    # boundary grid stays within the admission slack
    assert b.sup_check.max_modulus <= 1.0 + 1e-12


def test_blaschke_zero_parameter_is_identity():
    b = blaschke_factor(0.0)
    assert np.array_equal(b.series.coeffs, np.array([0.0, 1.0], dtype=complex))
    with pytest.raises(ValueError):
        blaschke_factor(1.0)


def test_self_map_admission():
    with pytest.raises(ValueError):
        SelfMapDisk(DiskPoly([0.0, 1.2]))
    with pytest.raises(ValueError):
        SelfMapDisk(DiskPoly([2.0]))
    const = SelfMapDisk(DiskPoly([0.5]))
    assert const.is_constant()
    b = SelfMapDisk(DiskPoly([0.0, 0.5, 0.5]))
    assert b.degree() == 2
    assert b.sup_check.max_modulus <= 1.0 + 1e-12


def test_ball_map_admission():
    half = BallPoly(2, {(1, 0): 0.5})
    other = BallPoly(2, {(0, 1): 0.5})
    bm = BallMap([half, other])
    assert bm.dim == 2
    assert not bm.is_constant()
    with pytest.raises(ValueError):
        BallMap([BallPoly(2, {(1, 0): 1.5}), BallPoly(2, {})])
    with pytest.raises(ValueError):
        BallMap([BallPoly(2, {(0, 0): 0.8}), BallPoly(2, {(0, 0): 0.8})])
    with pytest.raises(ValueError):
        BallMap([BallPoly(1, {(1,): 1.0}), BallPoly(1, {(1,): 1.0})])


def test_compose_with_identity_recovers_f():
    rng = np.random.default_rng(4)
    c = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    f = DiskPoly(c)
    ident = SelfMapDisk(DiskPoly.identity())
    g = compose(f, ident, 10)
    assert np.max(np.abs(g.coeffs - f.coeffs)) <= 1e-12


def test_compose_matches_convolved_powers():
    # oracle: assemble f(b(z)) coefficients from explicit polynomial powers
    rng = np.random.default_rng(5)
    fc = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    f = DiskPoly(fc)
    raw = DiskPoly([0.1, 0.4, -0.2, 0.1j])
    b = SelfMapDisk((0.9 / sup_norm_circle(raw, 1024)) * raw)
    out_degree = 3 * 6
    expected = np.zeros(out_degree + 1, dtype=complex)
    power = np.ones(1, dtype=complex)
    expected[0] = fc[0]
    for k in range(1, 7):
        power = np.convolve(power, b.series.trimmed())
        expected[: power.size] += fc[k] * power
    got = compose(f, b, out_degree)
    assert np.max(np.abs(got.coeffs - expected)) <= 1e-11


def test_compose_parameter_validation():
    f = DiskPoly([1.0, 1.0])
    b = SelfMapDisk(DiskPoly([0.0, 0.5]))
    with pytest.raises(ParameterError):
        compose(f, b, 10, sample_radius=1.0)
    with pytest.raises(ParameterError):
        compose(f, b, 10, sample_radius=0.0)
    with pytest.raises(ParameterError):
        compose(f, b, 0)
    with pytest.raises(ParameterError):
        compose(f, b, 10, samples=12)
    with pytest.raises(ParameterError):
        compose(f, b, 100000, sample_radius=0.001)
    with pytest.raises(TypeError):
        compose(f, DiskPoly([0.0, 0.5]), 10)


def test_reciprocal_convolves_to_one():
    f = DiskPoly([1.0, -0.3, 0.2])
    g = reciprocal(f, 40)
    conv = np.convolve(f.coeffs, g.coeffs)[:41]
    conv[0] -= 1.0
    assert np.max(np.abs(conv)) <= 1e-10


def test_reciprocal_flags_singular_symbol():
    # root at z = 0.9 sits exactly on the default sample circle at angle 0
    f = DiskPoly([0.9, -1.0])
    with pytest.raises(SingularSymbolError) as err:
        reciprocal(f, 16)
    assert "0.9" in str(err.value)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=8),
       st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=8),
       st.floats(-2.0, 2.0))
def test_compose_is_linear_in_f(c1, c2, scale):
    f1 = DiskPoly(c1)
    f2 = DiskPoly(c2)
    b = SelfMapDisk(DiskPoly([0.1, 0.3, 0.2]))
    combined = compose(DiskPoly(scale * f1.padded(7) + f2.padded(7)), b, 21)
    split = DiskPoly(
        scale * compose(f1, b, 21).coeffs + compose(f2, b, 21).coeffs)
    assert np.max(np.abs(combined.coeffs - split.coeffs)) <= 1e-10
