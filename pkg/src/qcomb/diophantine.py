"""Continued fractions, inhomogeneous approximation, LLL, nearest-plane and Kronecker systems."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import FieldElem, to_float
from .lattice import mat_inv_det, mat_vec


class CapExceeded(RuntimeError):
    """No solution exists below the search cap."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


# -- continued fractions ----------------------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    value: FieldElem
    partial_quotients: tuple[int, ...]
    period_start: int
    period_length: int

    def quotient(self, k: int) -> int:
        if k < len(self.partial_quotients):
            return self.partial_quotients[k]
        j = self.period_start + (k - self.period_start) % self.period_length
        return self.partial_quotients[j]

    def convergents(self, n: int | None = None) -> list[tuple[int, int]]:
        """First ``n`` convergents ``(p_k, q_k)``."""
        n = len(self.partial_quotients) if n is None else n
        out = []
        p0, p1, q0, q1 = 0, 1, 1, 0
        for k in range(n):
            a = self.quotient(k)
            p0, p1 = p1, a * p1 + p0
            q0, q1 = q1, a * q1 + q0
            out.append((p1, q1))
        return out

    def iter_convergents(self):
        p0, p1, q0, q1 = 0, 1, 1, 0
        for k in itertools.count():
            a = self.quotient(k)
            p0, p1 = p1, a * p1 + p0
            q0, q1 = q1, a * q1 + q0
            yield p1, q1


def _surd_floor(P: int, D: int, Q: int) -> int:
    r = math.isqrt(D)
    if Q > 0:
        return (P + r) // Q
    return (-P - r - 1) // -Q


def cf_expand(x: FieldElem, n_terms: int = 20) -> CFExpansion:
    """Exact continued fraction of a quadratic irrational via the surd recursion."""
    a, b, q = x.parts
    if b == 0:
        raise ValueError("cf_expand needs an irrational input; rationals have finite expansions (use Fraction)")
    D = b * b * x.disc
    P, Q = (a, q) if b > 0 else (-a, -q)
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    period = None
    k = 0
    while True:
        state = (P, Q)
        if period is None and state in seen:
            period = (seen[state], k - seen[state])
        if period is not None and len(quotients) >= n_terms:
            break
        seen.setdefault(state, k)
        ak = _surd_floor(P, D, Q)
        quotients.append(ak)
        P = ak * Q - P
        Q = (D - P * P) // Q
        k += 1
    return CFExpansion(x, tuple(quotients), period[0], period[1])


def _nearest(v) -> int:
    return math.floor(v + Fraction(1, 2))


def best_homogeneous(x: FieldElem, eps: float) -> tuple[int, int]:
    """Least ``s > 0`` with ``|s*x + r| < eps`` for some integer ``r``.

    Record-small values of ``|s x - p|`` only occur at convergent
    denominators, so the convergents are scanned in order.
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    e = Fraction(eps)
    cf = cf_expand(x, 2)
    for _, s in cf.iter_convergents():
        r = -_nearest(s * x)
        if abs(s * x + r) < e:
            return s, r
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class InhomogeneousSolution:
    s: int
    r: int
    residual: float
    exact_residual: object = dc_field(compare=False, default=None)


def _exact(v):
    if isinstance(v, (FieldElem, Fraction, int)):
        return v
    return Fraction(float(v))


def best_inhomogeneous(
    x, beta, eps: float, s_cap: int = 10**6, exclude_zero_residual: bool = False, chunk: int = 1 << 16
) -> InhomogeneousSolution:
    """Least ``|s| >= 1`` with ``|s*x + beta + r| < eps``.

    Ties in ``|s|`` go to the smaller ``|residual|``, then to positive ``s``.
    Candidates are screened in floating point and confirmed exactly.
    """
    if not eps > 0 or s_cap < 1:
        raise ValueError("need eps > 0 and s_cap >= 1")
    xe, be, e = _exact(x), _exact(beta), Fraction(eps)
    xf, bf = float(xe), float(be)
    for start in range(1, s_cap + 1, chunk):
        s = np.arange(start, min(start + chunk, s_cap + 1), dtype=np.float64)
        best = None
        for sgn in (1, -1):
            v = sgn * s * xf + bf
            res = v - np.rint(v)
            margin = 1e-12 + 4e-16 * (np.abs(s * xf) + abs(bf))
            hits = np.nonzero(np.abs(res) < eps + margin)[0]
            for h in hits:
                si = sgn * int(s[h])
                val = si * xe + be
                r = -_nearest(val)
                ex = val + r
                if abs(ex) < e and not (exclude_zero_residual and ex == 0):
                    cand = (abs(si), abs(ex), -sgn, si, r, ex)
                    if best is None or cand[:3] < best[:3]:
                        best = cand
                    break
        if best is not None:
            _, _, _, si, r, ex = best
            return InhomogeneousSolution(si, r, float(ex), ex)
    raise CapExceeded(f"no |s| <= {s_cap} with |s*x + beta + r| < {eps}", s_cap)


# -- LLL and nearest plane -------------------------------------------------------


@dataclass(frozen=True)
class LLLResult:
    basis: list[list[Fraction]]
    transform: list[list[int]]  # reduced = transform @ input


def _gram_schmidt(B):
    n = len(B)
    Bs, mu, norms = [], [[Fraction(0)] * n for _ in range(n)], []
    for i in range(n):
        v = list(B[i])
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = sum((a * b for a, b in zip(B[i], Bs[j])), Fraction(0)) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, Bs[j])]
        Bs.append(v)
        norms.append(sum((a * a for a in v), Fraction(0)))
    return Bs, mu, norms


def lll_reduce(vectors: Sequence[Sequence], delta=Fraction(3, 4)) -> LLLResult:
    """Exact LLL reduction of the row vectors (integer or rational entries)."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    B = [[Fraction(v) for v in row] for row in vectors]
    n = len(B)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Bs, mu, norms = _gram_schmidt(B)
    if any(nv == 0 for nv in norms):
        raise ValueError("input vectors are linearly dependent")
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            qj = round(mu[k][j])
            if qj:
                B[k] = [a - qj * b for a, b in zip(B[k], B[j])]
                U[k] = [a - qj * b for a, b in zip(U[k], U[j])]
                for l in range(j):
                    mu[k][l] -= qj * mu[j][l]
                mu[k][j] -= qj
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            Bs, mu, norms = _gram_schmidt(B)
            k = max(k - 1, 1)
    return LLLResult(B, U)


def is_lll_reduced(vectors, delta=Fraction(3, 4)) -> bool:
    B = [[Fraction(v) for v in row] for row in vectors]
    _, mu, norms = _gram_schmidt(B)
    n = len(B)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    return all(norms[k] >= (Fraction(delta) - mu[k][k - 1] ** 2) * norms[k - 1] for k in range(1, n))


@dataclass(frozen=True)
class BabaiResult:
    coeffs: tuple[int, ...]
    point: tuple[float, ...]
    distance: float


def babai_nearest(vectors: Sequence[Sequence], target: Sequence[float]) -> BabaiResult:
    """Nearest-plane rounding of ``target`` onto the lattice of the row vectors."""
    B = [[Fraction(v) for v in row] for row in vectors]
    Bs, _, norms = _gram_schmidt(B)
    t = [Fraction(v) for v in target]
    n = len(B)
    c = [0] * n
    for j in range(n - 1, -1, -1):
        cj = round(sum((a * b for a, b in zip(t, Bs[j])), Fraction(0)) / norms[j])
        c[j] = cj
        t = [a - cj * b for a, b in zip(t, B[j])]
    pt = [sum(c[j] * B[j][i] for j in range(n)) for i in range(len(target))]
    dist = math.sqrt(float(sum((a * a for a in t), Fraction(0))))
    return BabaiResult(tuple(c), tuple(float(v) for v in pt), dist)


def close_vectors(basis: np.ndarray, target: np.ndarray, radius: float, limit: int = 10**6) -> list[np.ndarray]:
    """Integer coefficient vectors of every lattice point within ``radius`` of ``target``.

    Depth-first enumeration on the Gram-Schmidt data (rows are generators).
    """
    B = np.asarray(basis, dtype=float)
    n = B.shape[0]
    Q, R = np.linalg.qr(B.T)
    # B.T = Q R  =>  coordinates of x = B.T c are R c in the Q frame
    t = Q.T @ np.asarray(target, dtype=float)
    out_of_span = float(np.sum(np.asarray(target, dtype=float) ** 2) - np.sum(t**2))
    r2 = radius * radius - max(out_of_span, 0.0)
    found: list[np.ndarray] = []
    if r2 < 0:
        return found
    c = np.zeros(n, dtype=np.int64)

    def rec(level: int, remaining: float):
        s = t[level] - float(R[level, level + 1 :] @ c[level + 1 :])
        d = R[level, level]
        center = s / d
        half = math.sqrt(max(remaining, 0.0)) / abs(d)
        for v in range(math.ceil(center - half - 1e-12), math.floor(center + half + 1e-12) + 1):
            c[level] = v
            rem = remaining - (s - d * v) ** 2
            if rem < -1e-12 * (1 + radius * radius):
                continue
            if level == 0:
                found.append(c.copy())
                if len(found) > limit:
                    raise CapExceeded("too many close vectors", limit)
            else:
                rec(level - 1, rem)
        c[level] = 0

    rec(n - 1, r2)
    return found


# -- Kronecker systems -----------------------------------------------------------


@dataclass
class KroneckerSystem:
    freqs: list  # vectors omega_n (floats, Fractions or FieldElems)
    targets: list
    tol: float

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.freqs:
            raise ValueError("freqs must be nonempty")
        self.freqs = [tuple(f) if isinstance(f, (list, tuple)) else (f,) for f in self.freqs]
        if len(self.targets) != len(self.freqs):
            raise ValueError("one target per frequency")

    @property
    def dim(self) -> int:
        return len(self.freqs[0])

    def is_exact(self) -> bool:
        vals = [v for f in self.freqs for v in f] + list(self.targets)
        return all(isinstance(v, (FieldElem, Fraction, int)) for v in vals)


@dataclass(frozen=True)
class KroneckerSolution:
    tau: tuple
    tau_float: tuple[float, ...]
    residual: float  # max_n dist(<tau, omega_n> - z_n, Z)


def _dist_to_int(v) -> object:
    return abs(v - _nearest(v))


def _as_float(v) -> float:
    return to_float(v)[0] if isinstance(v, FieldElem) else float(v)


def kronecker_solve(sys: KroneckerSystem, search_radius: float, limit: int = 10**6) -> list[KroneckerSolution]:
    """All verified ``tau`` with ``|tau| <= search_radius`` solving the system.

    ``tau`` is pinned by ``p`` independent frequencies up to an integer
    vector ``k``; the remaining conditions become a close-vector problem
    on the embedded lattice with scaling ``1/tol``, enumerated completely
    on an LLL-reduced basis and re-verified directly.
    """
    p = sys.dim
    N = len(sys.freqs)
    exact = sys.is_exact()
    Wf = np.array([[_as_float(v) for v in f] for f in sys.freqs])
    zf = np.array([_as_float(v) for v in sys.targets])
    # pick p independent frequencies greedily
    idx: list[int] = []
    for n in range(N):
        trial = idx + [n]
        if np.linalg.matrix_rank(Wf[trial], tol=1e-12) == len(trial):
            idx = trial
        if len(idx) == p:
            break
    if len(idx) < p:
        raise ValueError("frequencies must span R^p")
    rest = [n for n in range(N) if n not in idx]
    W = Wf[idx]
    Winv = np.linalg.inv(W)
    zI = zf[idx]
    K = np.array([np.linalg.norm(W[i]) * search_radius + abs(zI[i]) + 1.0 for i in range(p)])
    beta = sys.tol
    G = np.array([[Wf[n] @ Winv[:, i] for i in range(p)] for n in rest]).reshape(len(rest), p)
    h = np.array([Wf[n] @ (Winv @ zI) - zf[n] for n in rest])
    m = len(rest)
    basis = np.zeros((p + m, p + m))
    for i in range(p):
        basis[i, i] = 1.0 / K[i]
        basis[i, p:] = G[:, i] / beta
    for j in range(m):
        basis[p + j, p + j] = -1.0 / beta
    target = np.concatenate([-zI / K, -h / beta])
    scale = 2.0**40 / max(np.abs(basis).max(), 1.0)
    int_basis = [[int(round(v * scale)) for v in row] for row in basis]
    U = np.array(lll_reduce(int_basis).transform, dtype=float)
    reduced = U @ basis
    coeffs = close_vectors(reduced, target, math.sqrt(N) * (1 + 1e-9) + 1e-9, limit)
    if exact:
        W_ex = tuple(tuple(sys.freqs[i]) for i in idx)
        Winv_ex, _ = mat_inv_det(tuple(tuple(_to_field(v, sys) for v in row) for row in W_ex))
        zI_ex = [_to_field(sys.targets[i], sys) for i in idx]
    sols: dict[tuple, KroneckerSolution] = {}
    for c in coeffs:
        full = np.rint(c @ U).astype(np.int64)
        k = [int(v) for v in full[:p]]
        if exact:
            tau = mat_vec(Winv_ex, tuple(z + kk for z, kk in zip(zI_ex, k)))
            tf = tuple(_as_float(v) for v in tau)
            if math.sqrt(sum(v * v for v in tf)) > search_radius:
                continue
            res = max(
                _dist_to_int(sum((_to_field(w, sys) * t for w, t in zip(f, tau)), -_to_field(z, sys)))
                for f, z in zip(sys.freqs, sys.targets)
            )
            if not res < Fraction(beta):
                continue
            resf = _as_float(res)
        else:
            tau_arr = Winv @ (zI + np.array(k, dtype=float))
            tf = tuple(float(v) for v in tau_arr)
            if float(np.linalg.norm(tau_arr)) > search_radius:
                continue
            vals = Wf @ tau_arr - zf
            resf = float(np.max(np.abs(vals - np.rint(vals))))
            if not resf < beta:
                continue
            tau = tf
        sols[tuple(k)] = KroneckerSolution(tuple(tau), tf, resf)
    return sorted(sols.values(), key=lambda s: (math.hypot(*s.tau_float), s.tau_float))


def _to_field(v, sys: KroneckerSystem):
    if isinstance(v, FieldElem):
        return v
    disc = next((u.disc for f in sys.freqs for u in f if isinstance(u, FieldElem)), 2)
    return FieldElem(Fraction(v), 0, disc)


def almost_periods(
    freqs: Sequence, coeffs: Sequence[float], eps: float, search_radius: float
) -> list[tuple[tuple, float]]:
    """Certified ``eps``-almost periods of ``Q(x) = sum c_n exp(2 pi i <x, omega_n>)``.

    The bound uses ``|exp(2 pi i d) - 1| <= 2 pi |d|``, giving
    ``sup_x |Q(x + tau) - Q(x)| <= 2 pi sum |c_n| dist(<tau, omega_n>, Z)``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    freqs = [tuple(f) if isinstance(f, (list, tuple)) else (f,) for f in freqs]
    p = len(freqs[0])
    weight = sum(abs(c) for c in coeffs)
    live = [(f, abs(c)) for f, c in zip(freqs, coeffs) if any(_as_float(v) != 0 for v in f) and c != 0]
    if not live:
        # every tau is a period; report the integer points of the ball as a sample
        R = int(math.floor(search_radius))
        pts = [
            t for t in itertools.product(range(-R, R + 1), repeat=p) if math.hypot(*t) <= search_radius
        ]
        return sorted(((t, 0.0) for t in pts), key=lambda tb: (math.hypot(*tb[0]), tb[0]))
    beta = eps / (2 * math.pi * weight)
    sys = KroneckerSystem([f for f, _ in live], [0] * len(live), beta)
    out = []
    for sol in kronecker_solve(sys, search_radius):
        bound = 2 * math.pi * sum(
            c * _as_float(_dist_to_int(sum((_to_field(w, sys) * t for w, t in zip(f, sol.tau)), _to_field(0, sys))))
            if sys.is_exact()
            else c * _float_dist(np.dot([_as_float(w) for w in f], sol.tau_float))
            for f, c in live
        )
        if bound <= eps:
            out.append((sol.tau, bound))
    return out


def _float_dist(v: float) -> float:
    return abs(v - round(v))


def solution_gaps(taus: Sequence[float]) -> dict:
    """Gap statistics of sorted one-dimensional solutions."""
    xs = np.sort(np.asarray(taus, dtype=float))
    if len(xs) < 2:
        return {"count": int(len(xs)), "max_gap": math.inf, "mean_gap": math.inf}
    g = np.diff(xs)
    return {"count": int(len(xs)), "max_gap": float(g.max()), "mean_gap": float(g.mean()), "min_gap": float(g.min())}
