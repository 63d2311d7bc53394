"""Kernel evaluation, Gram matrices, and positivity certificates.

A kernel spec names one of the generalized kernels the experiments use; Gram
matrices over admissible point sets are hermitized on assembly; positivity is
decided by the spectrum against a size- and scale-aware tolerance, and failed
positivity comes with a reusable witness (the points plus the offending
eigenvector).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .series import BallMap, SelfMapDisk

__all__ = [
    "DomainError",
    "PointSet",
    "KernelSpec",
    "GramMatrix",
    "PositivityCertificate",
    "Witness",
    "PSD",
    "NEGATIVE",
    "INCONCLUSIVE",
    "eval_kernel",
    "gram",
    "check_psd",
    "find_negative_witness",
    "sample_point_set",
]

PSD = "PSD"
NEGATIVE = "NEGATIVE"
# reserved verdict: the current decision rule never returns it, but consumers
# of serialized certificates must accept it
INCONCLUSIVE = "INCONCLUSIVE"

MIN_POINT_SEPARATION = 1e-9


class DomainError(ValueError):
    """Points outside the open unit ball (or disk)."""


class PointSet:
    """Finite set of pairwise-distinct points strictly inside the unit ball.

    Stored as an (m, dim) complex array; dim-1 sets may be built from a plain
    sequence of complex numbers.
    """

    __slots__ = ("points",)

    def __init__(self, points, dim: int | None = None):
        arr = np.asarray(points, dtype=complex)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise ValueError("points must form a nonempty (m, dim) array")
        if dim is not None and arr.shape[1] != dim:
            raise ValueError(f"expected dim {dim}, got {arr.shape[1]}")
        radii = np.linalg.norm(arr, axis=1)
        if np.any(radii >= 1.0):
            raise DomainError(f"max |point| = {float(np.max(radii)):.6g}; need < 1")
        if arr.shape[0] > 1:
            diff = arr[:, None, :] - arr[None, :, :]
            dist = np.linalg.norm(diff, axis=2)
            dist[np.diag_indices_from(dist)] = np.inf
            if float(np.min(dist)) <= MIN_POINT_SEPARATION:
                raise ValueError("points must be pairwise separated by > 1e-9")
        self.points = arr

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def min_separation(self) -> float:
        if len(self) < 2:
            return float("inf")
        diff = self.points[:, None, :] - self.points[None, :, :]
        dist = np.linalg.norm(diff, axis=2)
        dist[np.diag_indices_from(dist)] = np.inf
        return float(np.min(dist))

    def to_json_list(self) -> list:
        return [
            [[float(c.real), float(c.imag)] for c in row] for row in self.points
        ]

    def __repr__(self):
        return f"PointSet(count={len(self)}, dim={self.dim})"


_KINDS = ("szego", "bergman", "dbr", "dbr_power", "ball", "ball_map")


@dataclass(frozen=True)
class KernelSpec:
    """One of the kernels under test.

    kind: szego      1 / (1 - z conj(w)) on the disk
          bergman    (1 - z conj(w)) ** (-alpha) on the disk
          dbr        (1 - b(z) conj(b(w))) / (1 - z conj(w))
          dbr_power  the dbr ratio raised to an integer alpha
          ball       (1 - <z, w>) ** (-alpha) on the dim-ball
          ball_map   ((1 - <b(z), b(w)>) / (1 - <z, w>)) ** alpha
    """

    kind: str
    alpha: float = 1.0
    dim: int = 1
    b_disk: SelfMapDisk | None = None
    b_ball: BallMap | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if not self.alpha >= 1.0:
            raise ValueError("alpha must be at least 1")
        if self.kind in ("szego", "bergman", "dbr", "dbr_power") and self.dim != 1:
            raise ValueError(f"kind {self.kind} lives on the disk")
        if self.kind in ("dbr", "dbr_power") and self.b_disk is None:
            raise ValueError(f"kind {self.kind} needs a disk symbol")
        if self.kind == "dbr_power" and self.alpha != int(self.alpha):
            raise ValueError("dbr_power is restricted to integer alpha")
        if self.kind == "szego" and self.alpha != 1.0:
            raise ValueError("szego fixes alpha = 1")
        if self.kind == "ball_map":
            if self.b_ball is None:
                raise ValueError("ball_map needs a BallMap")
            if self.b_ball.dim != self.dim:
                raise ValueError("map and spec dimensions must match")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")

    @classmethod
    def szego(cls) -> "KernelSpec":
        return cls(kind="szego")

    @classmethod
    def bergman(cls, alpha: float) -> "KernelSpec":
        return cls(kind="bergman", alpha=float(alpha))

    @classmethod
    def dbr(cls, b: SelfMapDisk) -> "KernelSpec":
        return cls(kind="dbr", b_disk=b)

    @classmethod
    def dbr_power(cls, b: SelfMapDisk, alpha: int) -> "KernelSpec":
        return cls(kind="dbr_power", alpha=float(alpha), b_disk=b)

    @classmethod
    def ball(cls, dim: int, alpha: float) -> "KernelSpec":
        return cls(kind="ball", dim=int(dim), alpha=float(alpha))

    @classmethod
    def ball_map(cls, b: BallMap, alpha: float) -> "KernelSpec":
        return cls(kind="ball_map", dim=b.dim, alpha=float(alpha), b_ball=b)

    @property
    def space_dim(self) -> int:
        return self.dim

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "alpha": float(self.alpha), "dim": self.dim}
        if self.b_disk is not None:
            out["b"] = self.b_disk.series.to_json_dict()
        if self.b_ball is not None:
            out["b"] = {
                "dim": self.b_ball.dim,
                "coords": [c.to_json_dict() for c in self.b_ball.coords],
            }
        return out


def _pair_products(spec: KernelSpec, pts: np.ndarray) -> np.ndarray:
    # ip[i, j] = <z_i, z_j> with the second slot conjugated
    return pts @ pts.conj().T


def gram(spec: KernelSpec, point_set: PointSet) -> "GramMatrix":
    """Gram matrix G[i, j] = K(w_i, w_j), hermitized on assembly."""
    if point_set.dim != spec.space_dim:
        raise DomainError("point set dimension does not match the kernel")
    pts = point_set.points
    ip = _pair_products(spec, pts)
    den = 1.0 - ip
    if spec.kind == "szego":
        g = 1.0 / den
    elif spec.kind in ("bergman", "ball"):
        g = den ** (-spec.alpha)
    elif spec.kind == "dbr":
        bv = spec.b_disk(pts[:, 0])
        g = (1.0 - np.outer(bv, bv.conj())) / den
    elif spec.kind == "dbr_power":
        bv = spec.b_disk(pts[:, 0])
        g = ((1.0 - np.outer(bv, bv.conj())) / den) ** int(spec.alpha)
    else:
        bz = spec.b_ball(pts)
        num = 1.0 - bz @ bz.conj().T
        ratio = num / den
        g = ratio ** int(spec.alpha) if spec.alpha == int(spec.alpha) \
            else ratio ** spec.alpha
    g = 0.5 * (g + g.conj().T)
    return GramMatrix(spec=spec, point_set=point_set, entries=g)


def eval_kernel(spec: KernelSpec, z, w) -> complex:
    """Kernel value at a single pair of points."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    ws = np.atleast_1d(np.asarray(w, dtype=complex))
    if zs.size != spec.space_dim or ws.size != spec.space_dim:
        raise DomainError("point dimension does not match the kernel")
    if np.linalg.norm(zs) >= 1.0 or np.linalg.norm(ws) >= 1.0:
        raise DomainError("points must lie strictly inside the ball")
    ip = complex(np.sum(zs * ws.conj()))
    den = 1.0 - ip
    if spec.kind == "szego":
        return 1.0 / den
    if spec.kind in ("bergman", "ball"):
        return den ** (-spec.alpha)
    if spec.kind == "dbr":
        return (1.0 - spec.b_disk(complex(zs[0])) * np.conj(spec.b_disk(complex(ws[0])))) / den
    if spec.kind == "dbr_power":
        base = (1.0 - spec.b_disk(complex(zs[0])) * np.conj(spec.b_disk(complex(ws[0])))) / den
        return base ** int(spec.alpha)
    bz = spec.b_ball(zs)
    bw = spec.b_ball(ws)
    num = 1.0 - complex(np.sum(bz * bw.conj()))
    ratio = num / den
    return ratio ** int(spec.alpha) if spec.alpha == int(spec.alpha) \
        else ratio ** spec.alpha


@dataclass
class GramMatrix:
    """Hermitian kernel matrix together with its generating data."""

    spec: KernelSpec
    point_set: PointSet
    entries: np.ndarray

    def __post_init__(self):
        g = self.entries
        if g.shape != (len(self.point_set),) * 2:
            raise ValueError("entry shape does not match the point set")
        if float(np.max(np.abs(g - g.conj().T))) > 1e-13:
            raise ValueError("entries are not Hermitian")


@dataclass
class Witness:
    """Points and coefficients exhibiting a negative kernel quadratic form."""

    point_set: PointSet
    coeffs: np.ndarray

    def to_json_dict(self) -> dict:
        return {
            "points": self.point_set.to_json_list(),
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }


@dataclass
class PositivityCertificate:
    """Spectral verdict on a Gram matrix.

    verdict is PSD when the smallest eigenvalue clears -tolerance, NEGATIVE
    otherwise; tolerance = tol_scale * size * ||G|| * eps.  INCONCLUSIVE is
    reserved and never produced by this rule.
    """

    spec: KernelSpec
    min_eigenvalue: float
    matrix_norm: float
    tolerance: float
    verdict: str
    witness: Witness | None = None
    seed: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json_dict(),
            "seed": self.seed,
        }


def check_psd(g: GramMatrix, tol_scale: float = 100.0) -> PositivityCertificate:
    """Eigenvalue test with a scale-aware tolerance.

    The tolerance grows with the matrix size and spectral norm so that honest
    rounding never triggers a NEGATIVE verdict; a NEGATIVE certificate carries
    the bottom eigenvector as a witness.
    """
    lam, vec = np.linalg.eigh(g.entries)
    lo = float(lam[0])
    nrm = float(max(abs(lam[0]), abs(lam[-1])))
    tol = tol_scale * g.entries.shape[0] * nrm * float(np.finfo(float).eps)
    if lo >= -tol:
        return PositivityCertificate(spec=g.spec, min_eigenvalue=lo,
                                     matrix_norm=nrm, tolerance=tol, verdict=PSD)
    wit = Witness(point_set=g.point_set, coeffs=vec[:, 0])
    return PositivityCertificate(spec=g.spec, min_eigenvalue=lo, matrix_norm=nrm,
                                 tolerance=tol, verdict=NEGATIVE, witness=wit)


def sample_point_set(rng: np.random.Generator, dim: int, radius: float,
                     count: int, max_rejects: int = 10000) -> PointSet:
    """Draw ``count`` points from the ball of the given radius.

    Each coordinate gets a uniform angle and an area-uniform radius; in
    dimension above one, draws landing outside the radius cap are rejected.
    Re-draws also resolve (vanishingly rare) pair collisions.
    """
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie strictly between 0 and 1")
    pts = np.zeros((count, dim), dtype=complex)
    have = 0
    rejects = 0
    while have < count:
        theta = rng.uniform(0.0, 2.0 * np.pi, size=dim)
        rad = radius * np.sqrt(rng.uniform(0.0, 1.0, size=dim))
        cand = rad * np.exp(1j * theta)
        ok = float(np.linalg.norm(cand)) < radius
        if ok and have > 0:
            sep = np.min(np.linalg.norm(pts[:have] - cand[None, :], axis=1))
            ok = sep > MIN_POINT_SEPARATION
        if ok:
            pts[have] = cand
            have += 1
        else:
            rejects += 1
            if rejects > max_rejects:
                raise RuntimeError("point sampling failed to fill the set")
    return PointSet(pts, dim=dim)


def seed_tuple(seed) -> tuple:
    """Normalize int or int-sequence seeds to a flat tuple for substreams."""
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def find_negative_witness(spec: KernelSpec, *, seed, radius: float,
                          set_size: int, budget: int,
                          tol_scale: float = 100.0):
    """Randomized search for a point set whose Gram fails positivity.

    Trial t draws from the substream (seed, t), so the outcome is independent
    of scheduling and restart.  Returns the first (PointSet, certificate) with
    a NEGATIVE verdict, or None when the budget is exhausted.
    """
    base = seed_tuple(seed)
    for trial in range(budget):
        rng = np.random.default_rng(base + (trial,))
        pts = sample_point_set(rng, spec.space_dim, radius, set_size)
        cert = check_psd(gram(spec, pts), tol_scale=tol_scale)
        if cert.verdict == NEGATIVE:
            cert.seed = seed
            return pts, cert
    return None
