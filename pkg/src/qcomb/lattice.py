"""Full-rank lattices ``L = A(Z^p)`` with exact bases over Q(sqrt d).

Basis matrices are stored row-major; the *columns* are the generators.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import DEFAULT_DISC, FieldElem, field, to_float

Point = tuple  # tuple of FieldElem
MAX_DIM = 4
DEFAULT_POINT_CAP = 10**6


class WindowTooLarge(RuntimeError):
    """A window enumeration would exceed the configured point cap."""


def point(*coords, disc: int = DEFAULT_DISC) -> Point:
    return tuple(field(c, disc) for c in coords)


def point_to_float(x: Sequence[FieldElem]) -> np.ndarray:
    return np.array([float(c) for c in x])


# -- small exact matrix helpers ---------------------------------------------------


def mat_mul(A, B):
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(1, len(B))), A[i][0] * B[0][j]) for j in range(len(B[0])))
        for i in range(len(A))
    )


def mat_vec(A, x):
    return tuple(sum((A[i][k] * x[k] for k in range(1, len(x))), A[i][0] * x[0]) for i in range(len(A)))


def transpose(A):
    return tuple(zip(*A))


def mat_inv_det(A):
    """Exact inverse and determinant by Gauss-Jordan elimination."""
    n = len(A)
    one = A[0][0] * 0 + 1
    M = [list(A[i]) + [one if i == j else one * 0 for j in range(n)] for i in range(n)]
    det = one
    for c in range(n):
        piv = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if piv is None:
            raise ValueError("singular basis: determinant is zero")
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        p = M[c][c]
        det = det * p
        inv_p = p.inverse()
        M[c] = [v * inv_p for v in M[c]]
        for r in range(n):
            if r != c and not M[r][c].is_zero():
                f = M[r][c]
                M[r] = [u - f * v for u, v in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M), det


class Lattice:
    """Full-rank lattice with an exact basis; columns of ``basis`` generate it."""

    __slots__ = ("basis", "disc", "_inv", "_det", "_float")

    def __init__(self, basis, disc: int = DEFAULT_DISC):
        rows = [list(r) for r in basis]
        p = len(rows)
        if p == 0 or p > MAX_DIM or any(len(r) != p for r in rows):
            raise ValueError(f"basis must be a square matrix of size 1..{MAX_DIM}")
        self.basis = tuple(tuple(field(v, disc) for v in r) for r in rows)
        self.disc = disc
        self._inv, self._det = mat_inv_det(self.basis)
        self._float = None

    @classmethod
    def from_columns(cls, columns, disc: int = DEFAULT_DISC) -> "Lattice":
        return cls(transpose(tuple(tuple(c) for c in columns)), disc)

    @classmethod
    def integer(cls, dim: int, disc: int = DEFAULT_DISC) -> "Lattice":
        return cls([[int(i == j) for j in range(dim)] for i in range(dim)], disc)

    @classmethod
    def diagonal(cls, entries, disc: int = DEFAULT_DISC) -> "Lattice":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], disc)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def columns(self) -> tuple:
        return transpose(self.basis)

    @property
    def inverse(self):
        return self._inv

    def float_basis(self) -> np.ndarray:
        if self._float is None:
            self._float = np.array([[float(v) for v in row] for row in self.basis])
        return self._float

    def coords(self, x: Point) -> tuple:
        """Exact coordinates ``A^{-1} x``."""
        return mat_vec(self._inv, x)

    def vector(self, n: Sequence[int]) -> Point:
        return mat_vec(self.basis, tuple(n))

    def scaled(self, k) -> "Lattice":
        return Lattice([[k * v for v in r] for r in self.basis], self.disc)

    def transformed(self, U) -> "Lattice":
        """Same lattice presented by the basis ``A @ U`` (U integer)."""
        Uf = tuple(tuple(field(v, self.disc) for v in r) for r in U)
        return Lattice(mat_mul(self.basis, Uf), self.disc)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        cols = ", ".join("(" + ", ".join(str(v) for v in c) + ")" for c in self.columns)
        return f"Lattice[{cols}]"


def det_abs(L: Lattice) -> FieldElem:
    return abs(L._det)


def dual(L: Lattice) -> Lattice:
    """Dual lattice ``{y : <x, y> in Z for x in L}``; basis ``A^{-T}``."""
    return Lattice(transpose(L._inv), L.disc)


def contains(L: Lattice, x: Point) -> bool:
    return all(c.is_integer() for c in L.coords(x))


def same_lattice(L1: Lattice, L2: Lattice) -> bool:
    if L1.dim != L2.dim:
        raise ValueError("lattices of different dimension")
    if L1.disc != L2.disc:
        return False
    M = mat_mul(L1._inv, L2.basis)
    if not all(v.is_integer() for row in M for v in row):
        return False
    return abs(L2._det / L1._det) == 1


def same_coset(L: Lattice, a: Point, b: Point) -> bool:
    return contains(L, tuple(u - v for u, v in zip(a, b)))


def reduce_mod(L: Lattice, x: Point) -> tuple[Point, tuple[int, ...]]:
    """Residue of ``x`` in the half-open fundamental parallelepiped of ``L``."""
    w = tuple(math.floor(c) for c in L.coords(x))
    Aw = L.vector(w)
    return tuple(u - v for u, v in zip(x, Aw)), w


def _float_bounds(M) -> np.ndarray:
    out = []
    for row in M:
        out.append([to_float(v)[0] for v in row])
    return np.array(out)


def enumerate_window(L: Lattice, offset: Point, box_radius: float, cap: int = DEFAULT_POINT_CAP) -> list[Point]:
    """All points of ``L + offset`` in the closed box ``[-R, R]^p``.

    Ordered lexicographically by the integer coordinates ``n`` of
    ``x = A n + offset``.
    """
    if not box_radius > 0:
        raise ValueError("box_radius must be positive")
    p = L.dim
    R = Fraction(box_radius)
    inv = _float_bounds(L._inv)
    c = -(inv @ np.array([float(v) for v in offset]))
    spread = float(box_radius) * np.abs(inv).sum(axis=1)
    lo = np.floor(c - spread - 1).astype(int)
    hi = np.ceil(c + spread + 1).astype(int)
    ranges = [range(int(l), int(h) + 1) for l, h in zip(lo, hi)]
    n_candidates = math.prod(len(r) for r in ranges)
    if n_candidates > 16 * cap:
        raise WindowTooLarge(f"window needs {n_candidates} candidates (cap {cap})")
    cols = L.columns
    out = []
    for n in itertools.product(*ranges):
        x = list(offset)
        for k, nk in enumerate(n):
            if nk:
                col = cols[k]
                for j in range(p):
                    x[j] = x[j] + nk * col[j]
        if all(-R <= v <= R for v in x):
            out.append(tuple(x))
            if len(out) > cap:
                raise WindowTooLarge(f"window holds more than {cap} points")
    return out


def enumerate_window_float(
    L: Lattice, offset: Sequence[float], center: Sequence[float], radius: float, cap: int = DEFAULT_POINT_CAP
) -> np.ndarray:
    """Float coordinates of the points of ``L + offset`` within ``radius`` of ``center``.

    The integer box is an over-approximation; the Euclidean filter is exact
    up to rounding, so callers should pad ``radius`` when they need
    completeness.
    """
    A = L.float_basis()
    Ainv = np.linalg.inv(A)
    off = np.asarray(offset, dtype=float)
    cen = np.asarray(center, dtype=float)
    c = Ainv @ (cen - off)
    spread = radius * np.linalg.norm(Ainv, axis=1)
    lo = np.floor(c - spread).astype(np.int64)
    hi = np.ceil(c + spread).astype(np.int64)
    sizes = hi - lo + 1
    if int(np.prod(sizes.astype(float))) > 16 * cap:
        raise WindowTooLarge(f"ball of radius {radius} needs {int(np.prod(sizes.astype(float)))} candidates")
    grids = np.meshgrid(*[np.arange(l, h + 1) for l, h in zip(lo, hi)], indexing="ij")
    N = np.stack([g.ravel() for g in grids], axis=1)
    X = N @ A.T + off
    keep = np.einsum("ij,ij->i", X - cen, X - cen) <= radius * radius
    X = X[keep]
    if len(X) > cap:
        raise WindowTooLarge(f"ball holds {len(X)} points (cap {cap})")
    return X


def min_norm_lower_bound(L: Lattice) -> float:
    """Certified-up-to-rounding lower bound on the shortest vector: sigma_min(A)."""
    s = np.linalg.svd(L.float_basis(), compute_uv=False)
    return float(s[-1]) * (1 - 1e-9)
