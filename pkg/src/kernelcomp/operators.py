"""Finite sections of composition and multiplication operators.

Sections are written against orthonormalized monomial bases of weighted power
series spaces.  Columns are kept exact: the row degree is always large enough
to hold the full image of every retained basis vector, so the largest singular
value of any column-prefix block is a certified lower bound for the operator
norm and grows monotonically with the number of columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .series import BallMap, BallPoly, DiskPoly, SelfMapDisk

__all__ = [
    "SpaceSpec",
    "SectionMatrix",
    "NormBound",
    "grlex_monomials",
    "monomial_norms",
    "comp_matrix",
    "mult_matrix",
    "weighted_comp_matrix",
    "op_norm_lower",
    "adjoint_kernel_check",
    "adjoint_mult_check",
]


@dataclass(frozen=True)
class SpaceSpec:
    """Weighted power series space on the unit ball of C^dim.

    ``alpha`` is the kernel exponent: the space has reproducing kernel
    (1 - <z, w>)^(-alpha), so alpha = 1 with dim = 1 is the square-summable
    Taylor space on the disk and larger alpha weights the radial direction.
    """

    dim: int = 1
    alpha: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if not self.alpha >= 1.0:
            raise ValueError("alpha must be at least 1")


@lru_cache(maxsize=None)
def _degree_block(total: int, dim: int) -> tuple:
    if dim == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in _degree_block(total - first, dim - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def grlex_monomials(dim: int, max_degree: int) -> tuple:
    """Multi-indices of total degree <= max_degree, graded lexicographic."""
    out = []
    for total in range(max_degree + 1):
        out.extend(_degree_block(total, dim))
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_count(dim: int, max_degree: int) -> int:
    return len(grlex_monomials(dim, max_degree))


def monomial_norms(space: SpaceSpec, max_degree: int) -> np.ndarray:
    """Norms of the monomials z^m, aligned with ``grlex_monomials``.

    ||z^m||^2 = m! / rising(alpha, |m|) where rising is the rising factorial;
    evaluated through log-gamma so large degrees neither overflow nor lose
    the exact value 1 when alpha = 1.
    """
    mons = grlex_monomials(space.dim, max_degree)
    lg_alpha = math.lgamma(space.alpha)
    out = np.empty(len(mons))
    for i, m in enumerate(mons):
        k = sum(m)
        log_sq = sum(math.lgamma(e + 1) for e in m)
        log_sq -= math.lgamma(space.alpha + k) - lg_alpha
        out[i] = math.exp(0.5 * log_sq)
    return out


@dataclass
class SectionMatrix:
    """Finite section with exact columns.

    ``entries[i, j]`` is the coefficient of the image of the j-th normalized
    monomial against the i-th, with rows covering every degree the images can
    reach.  ``kind`` tags sections that carry a closed-form norm upper bound.
    """

    space: SpaceSpec
    col_degree: int
    row_degree: int
    entries: np.ndarray
    kind: str = "generic"
    center_modulus: float | None = None

    def __post_init__(self):
        rows = _monomial_count(self.space.dim, self.row_degree)
        cols = _monomial_count(self.space.dim, self.col_degree)
        assert self.entries.shape == (rows, cols), "degree bookkeeping violation"


def _comp_entries_disk(coeffs: np.ndarray, norms: np.ndarray, col_degree: int,
                       row_degree: int) -> np.ndarray:
    """Columns are the Taylor coefficients of b**j, norm-corrected."""
    a = np.zeros((row_degree + 1, col_degree + 1), dtype=complex)
    power = np.ones(1, dtype=complex)
    a[0, 0] = 1.0
    for j in range(1, col_degree + 1):
        power = np.convolve(power, coeffs)
        a[: power.size, j] = power
    a *= norms[:, None]
    a /= norms[: col_degree + 1][None, :]
    return a


def _dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = tuple(x + y for x, y in zip(ma, mb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def comp_matrix(b, space: SpaceSpec, col_degree: int) -> SectionMatrix:
    """Section of the composition operator f -> f(b(z)).

    Column j holds the expansion of the normalized monomial composed with b,
    i.e. the coordinate powers b^(m_j).  Rows run through degree
    col_degree * deg(b), which contains those images exactly.  Constant
    symbols are rejected: their sections collapse to rank one and the exact
    norm is available in closed form instead.
    """
    if col_degree < 0:
        raise ValueError("col_degree must be nonnegative")
    if isinstance(b, SelfMapDisk):
        if space.dim != 1:
            raise ValueError("a disk symbol needs a dim-1 space")
        if b.is_constant():
            raise ValueError("constant symbols do not get finite sections")
        coeffs = [b.series.trimmed()]
        center = abs(b.center)
    elif isinstance(b, BallMap):
        if space.dim != b.dim:
            raise ValueError("map and space dimensions must match")
        if b.is_constant():
            raise ValueError("constant symbols do not get finite sections")
        center = float(np.linalg.norm(b.center))
        coeffs = None
    else:
        raise TypeError("b must be a SelfMapDisk or a BallMap")

    if isinstance(b, BallMap) and b.dim == 1:
        # dim-1 ball maps reduce to the disk path bit for bit
        deg = b.degree()
        c = np.zeros(deg + 1, dtype=complex)
        for m, v in b.coords[0].terms.items():
            c[m[0]] = v
        coeffs = [c]

    deg_b = b.degree()
    row_degree = col_degree * deg_b
    norms = monomial_norms(space, row_degree)

    if coeffs is not None:
        entries = _comp_entries_disk(coeffs[0], norms, col_degree, row_degree)
        return SectionMatrix(space, col_degree, row_degree, entries,
                             kind="composition", center_modulus=center)

    cols = grlex_monomials(space.dim, col_degree)
    rows = grlex_monomials(space.dim, row_degree)
    row_index = {m: i for i, m in enumerate(rows)}
    entries = np.zeros((len(rows), len(cols)), dtype=complex)
    zero = (0,) * space.dim
    powers = {zero: {zero: 1.0 + 0.0j}}
    for j, m in enumerate(cols):
        if m != zero:
            i_var = next(i for i, e in enumerate(m) if e > 0)
            prev = tuple(e - (1 if i == i_var else 0) for i, e in enumerate(m))
            powers[m] = _dict_mul(powers[prev], b.coords[i_var].terms)
        for mi, c in powers[m].items():
            i = row_index[mi]
            entries[i, j] = c * norms[i] / norms[j]
    return SectionMatrix(space, col_degree, row_degree, entries,
                         kind="composition", center_modulus=center)


def mult_matrix(f, space: SpaceSpec, col_degree: int,
                row_degree: int | None = None) -> SectionMatrix:
    """Section of the multiplication operator g -> f * g.

    Rows default to col_degree + deg(f), which holds every column exactly; a
    larger row_degree may be passed so sections of different symbols become
    conformable for sums.
    """
    if col_degree < 0:
        raise ValueError("col_degree must be nonnegative")
    if isinstance(f, DiskPoly):
        if space.dim != 1:
            raise ValueError("a disk weight needs a dim-1 space")
        f = BallPoly(1, {(n,): c for n, c in enumerate(f.coeffs) if c != 0})
    if not isinstance(f, BallPoly):
        raise TypeError("f must be a DiskPoly or a BallPoly")
    if f.dim != space.dim:
        raise ValueError("weight and space dimensions must match")
    needed = col_degree + f.degree()
    if row_degree is None:
        row_degree = needed
    elif row_degree < needed:
        raise ValueError("row_degree too small to hold the columns exactly")
    cols = grlex_monomials(space.dim, col_degree)
    rows = grlex_monomials(space.dim, row_degree)
    row_index = {m: i for i, m in enumerate(rows)}
    norms = monomial_norms(space, row_degree)
    entries = np.zeros((len(rows), len(cols)), dtype=complex)
    for j, mj in enumerate(cols):
        for t, c in f.terms.items():
            mi = tuple(x + y for x, y in zip(mj, t))
            i = row_index[mi]
            entries[i, j] = c * norms[i] / norms[j]
    return SectionMatrix(space, col_degree, row_degree, entries,
                         kind="multiplication")


def weighted_comp_matrix(f, b, space: SpaceSpec, col_degree: int) -> SectionMatrix:
    """Section of g -> f * (g o b), the multiplication section times the
    composition section, with exact intermediate degree."""
    comp = comp_matrix(b, space, col_degree)
    mult = mult_matrix(f, space, comp.row_degree)
    assert mult.entries.shape[1] == comp.entries.shape[0], "degree bookkeeping violation"
    entries = mult.entries @ comp.entries
    return SectionMatrix(space, col_degree, mult.row_degree, entries,
                         kind="weighted")


@dataclass
class NormBound:
    """Certified norm bracket from a finite section.

    ``lower`` is exact-column evidence (a true lower bound up to rounding);
    ``upper`` is a closed-form bound when one is known for the section kind.
    ``trace`` records (column degree, lower bound) pairs for convergence plots.
    """

    lower: float
    upper: float | None
    col_degree: int
    trace: list = field(default_factory=list)

    def csv_rows(self) -> list:
        up = self.upper if self.upper is not None else float("nan")
        return [[n, lo, up] for n, lo in self.trace]


def _default_trace_degrees(col_degree: int) -> list:
    if col_degree <= 32:
        return list(range(col_degree + 1))
    ds = {0, col_degree}
    d = 1
    while d < col_degree:
        ds.add(d)
        d *= 2
    return sorted(ds)


def op_norm_lower(section: SectionMatrix, trace_degrees=None) -> NormBound:
    """Largest singular values of column-prefix blocks of an exact section.

    Each prefix keeps the columns of degree <= d and all rows, so its top
    singular value is a true lower bound for the operator norm; the bounds
    are nondecreasing in d.  All-zero rows are dropped before the SVD, which
    leaves singular values unchanged.  Disk composition sections also carry
    the closed-form upper bound ((1 + |b(0)|) / (1 - |b(0)|)) ** (alpha / 2).
    """
    if trace_degrees is None:
        trace_degrees = _default_trace_degrees(section.col_degree)
    degrees = sorted(set(int(d) for d in trace_degrees))
    if not degrees or degrees[0] < 0 or degrees[-1] > section.col_degree:
        raise ValueError("trace degrees must lie between 0 and col_degree")
    trace = []
    for d in degrees:
        cols = _monomial_count(section.space.dim, d)
        block = section.entries[:, :cols]
        block = block[np.any(block != 0, axis=1)]
        sigma = float(np.linalg.svd(block, compute_uv=False)[0]) if block.size else 0.0
        trace.append((d, sigma))
    upper = None
    if (section.kind == "composition" and section.center_modulus is not None
            and section.space.dim == 1):
        # valid because disk symbols always have a positive symbol kernel;
        # ball sections must certify positivity before claiming this bound
        c = section.center_modulus
        upper = float(((1.0 + c) / (1.0 - c)) ** (section.space.alpha / 2.0))
    return NormBound(lower=trace[-1][1], upper=upper,
                     col_degree=degrees[-1], trace=trace)


def _kernel_coeff_vector(space: SpaceSpec, max_degree: int, w) -> np.ndarray:
    """Coefficients of the reproducing kernel at w against the normalized
    monomials: conj(w^m) / ||z^m||, truncated at max_degree."""
    mons = grlex_monomials(space.dim, max_degree)
    norms = monomial_norms(space, max_degree)
    wv = np.atleast_1d(np.asarray(w, dtype=complex))
    if wv.size != space.dim:
        raise ValueError("point dimension mismatch")
    vals = np.array([np.prod(wv ** np.array(m)) for m in mons])
    return np.conj(vals) / norms


def adjoint_kernel_check(b, space: SpaceSpec, col_degree: int, w) -> float:
    """Residual of the identity: the composition adjoint sends the kernel at w
    to the kernel at b(w).  Truncated sections make this exact through the
    column degree, so the residual is pure rounding for |w| <= 0.7."""
    wv = np.atleast_1d(np.asarray(w, dtype=complex))
    if float(np.linalg.norm(wv)) > 0.7:
        raise ValueError("check points must satisfy |w| <= 0.7")
    section = comp_matrix(b, space, col_degree)
    kv_rows = _kernel_coeff_vector(space, section.row_degree, wv)
    if isinstance(b, SelfMapDisk):
        bw = b(complex(wv[0]))
    else:
        bw = b(wv)
    target = _kernel_coeff_vector(space, col_degree, bw)
    resid = section.entries.conj().T @ kv_rows - target
    return float(np.max(np.abs(resid)))


def adjoint_mult_check(f, space: SpaceSpec, col_degree: int, w) -> float:
    """Residual of the identity: the multiplication adjoint scales the kernel
    at w by conj(f(w)).  Exact through the column degree."""
    wv = np.atleast_1d(np.asarray(w, dtype=complex))
    if float(np.linalg.norm(wv)) > 0.7:
        raise ValueError("check points must satisfy |w| <= 0.7")
    section = mult_matrix(f, space, col_degree)
    kv_rows = _kernel_coeff_vector(space, section.row_degree, wv)
    if isinstance(f, DiskPoly):
        fw = f(complex(wv[0]))
    else:
        fw = f(wv)
    target = np.conj(complex(fw)) * _kernel_coeff_vector(space, col_degree, wv)
    resid = section.entries.conj().T @ kv_rows - target
    return float(np.max(np.abs(resid)))
