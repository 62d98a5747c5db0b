"""Period extraction and coset decomposition for point sets, and the two-coset counterexample.

Point sets are lists of points, either exact tuples of ``FieldElem`` or
float tuples.  Exact sets are matched exactly: a translation ``T`` is a
period on a window only if every translated point is literally present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy.spatial import cKDTree

from .analysis import PointCloud, difference_profile, discreteness_profile, min_positive_gap_1d, project
from .comb import Comb, atom_weight, atoms_in_window, coset_comb, integer_comb
from .diophantine import CapExceeded, best_inhomogeneous
from .exactnum import DEFAULT_DISC, FieldElem, field, to_float
from .intlin import rational_module_basis
from .lattice import Lattice, dual, mat_inv_det, reduce_mod

# -- failures ----------------------------------------------------------------------------

NO_MATCH = "no_match"
AMBIGUOUS_MATCH = "ambiguous_match"
VERIFICATION_MISS = "verification_miss"
RADIUS_TOO_LARGE = "radius_too_large"
WINDOW_TOO_SMALL = "window_too_small"


class PeriodError(RuntimeError):
    def __init__(self, code: str, message: str, **detail):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.detail = detail


class ConeExhausted(RuntimeError):
    def __init__(self, cone: "ConeSpec", tried: int, codes: dict):
        super().__init__(f"cone {cone.axis_index} (aperture {cone.aperture}) exhausted after {tried} candidates: {codes}")
        self.cone = cone
        self.tried = tried
        self.codes = codes


class CosetInstability(RuntimeError):
    """Residue count changed between the window and its half."""


# -- windowed point sets -----------------------------------------------------------------


class PointSet:
    """Windowed point set with a k-d tree and exact integer keys."""

    def __init__(self, points, window: float, den: int | None = None):
        self.cloud = PointCloud(points, window)
        self.window = window
        self.exact = self.cloud.exact
        self.tree = cKDTree(self.cloud.coords) if len(self.cloud) else None
        if self.exact and den is not None:
            self.rebase(den)
        self._keys = None

    @property
    def points(self):
        return self.cloud.points

    @property
    def coords(self) -> np.ndarray:
        return self.cloud.coords

    def __len__(self):
        return len(self.cloud)

    def rebase(self, den: int) -> None:
        c = self.cloud
        if den % c.den:
            raise ValueError("new denominator must be a multiple of the old one")
        if den != c.den:
            c.ints = c.ints * (den // c.den)
            c.den = den
        self._keys = None

    @property
    def keys(self) -> set:
        if self._keys is None:
            self._keys = set(map(tuple, self.cloud.ints.tolist()))
        return self._keys

    def float_tol(self) -> float:
        return 1e-9 * (1 + self.window)


def _as_sets(P1, P2, window: float) -> tuple[PointSet, PointSet]:
    if isinstance(P1, PointSet) and isinstance(P2, PointSet):
        return P1, P2
    A, B = PointSet(P1, window), PointSet(P2, window)
    if A.exact != B.exact:
        raise TypeError("cannot mix exact and float point sets")
    if A.exact:
        den = math.lcm(A.cloud.den, B.cloud.den)
        A.rebase(den)
        B.rebase(den)
    return A, B


def _vec_ints(v: Sequence[FieldElem], den: int) -> np.ndarray | None:
    out = []
    for c in v:
        a, b, q = c.parts
        if den % q:
            return None
        out += [a * (den // q), b * (den // q)]
    return np.array(out, dtype=object if max(map(abs, out), default=0) >= 2**60 else np.int64)


def _norm(v) -> float:
    return math.sqrt(sum(to_float(c)[0] ** 2 if isinstance(c, FieldElem) else float(c) ** 2 for c in v))


def _translation_mismatch(S: PointSet, T, tnorm: float, first_only: bool = False) -> tuple[int, float]:
    """Points ``x`` of ``S`` with ``x +- T`` inside the shrunken box but missing from ``S``."""
    inner = S.window - tnorm - 1e-9
    if inner <= 0:
        return 0, 0.0
    misses, worst = 0, 0.0
    if S.exact:
        Ti = _vec_ints(T, S.cloud.den)
        if Ti is None:
            return len(S), math.inf  # T is not even on the point grid
        Tf = np.array([to_float(c)[0] for c in T])
        for sgn in (1, -1):
            moved_f = S.coords + sgn * Tf
            idx = np.nonzero(np.all(np.abs(moved_f) <= inner, axis=1))[0]
            moved = S.cloud.ints[idx] + sgn * Ti
            keys = S.keys
            for row in map(tuple, moved.tolist()):
                if row not in keys:
                    misses += 1
                    worst = math.inf
                    if first_only:
                        return misses, worst
        return misses, 0.0
    Tf = np.asarray(T, dtype=float)
    tol = S.float_tol()
    for sgn in (1, -1):
        moved = S.coords + sgn * Tf
        moved = moved[np.all(np.abs(moved) <= inner, axis=1)]
        if not len(moved):
            continue
        d, _ = S.tree.query(moved)
        worst = max(worst, float(d.max()))
        misses += int(np.count_nonzero(d > tol))
        if first_only and misses:
            return misses, worst
    return misses, worst


# -- periods -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeSpec:
    """``C_j = {x : |x - <x, e_j> e_j| < aperture * |x|}``."""

    axis_index: int
    aperture: float = 0.2

    def __post_init__(self):
        if not 0 < self.aperture < 1:
            raise ValueError("cone aperture must lie in (0, 1)")

    def contains(self, v: np.ndarray) -> np.ndarray:
        v = np.atleast_2d(v)
        n = np.linalg.norm(v, axis=1)
        perp = np.sqrt(np.maximum(n * n - v[:, self.axis_index] ** 2, 0.0))
        return perp < self.aperture * n


def default_cones(dim: int, aperture: float | None = None) -> list[ConeSpec]:
    a = aperture if aperture is not None else 0.85 / (2 * math.sqrt(dim))
    return [ConeSpec(j, a) for j in range(dim)]


@dataclass
class PeriodCertificate:
    T: tuple
    tau: tuple
    anchor: tuple
    max_mismatch: float
    window: float
    match_radius: float

    def to_json(self) -> dict:
        return {
            "T": [_coord_json(c) for c in self.T],
            "tau": [float(c) for c in self.tau],
            "anchor": [_coord_json(c) for c in self.anchor],
            "max_mismatch": self.max_mismatch,
            "window": self.window,
            "match_radius": self.match_radius,
        }


def _coord_json(c):
    return c.to_json() if isinstance(c, FieldElem) else float(c)


@dataclass
class SnapContext:
    """Cached quantities shared by repeated ``snap_period`` calls on the same sets."""

    P1: PointSet
    P2: PointSet
    separation: float
    difference_gap: float
    limit: float  # match radii must stay below this
    anchor: tuple
    anchor_index: int

    @classmethod
    def build(cls, P1, P2, window: float, diff_window: float = 10.0) -> "SnapContext":
        A, B = _as_sets(P1, P2, window)
        if len(A) < 2 or len(B) < 2:
            raise PeriodError(WINDOW_TOO_SMALL, "each set needs at least two points in the window")
        sep = min(discreteness_profile(S.cloud, window, fill=False).separation_radius for S in (A, B))
        dw = min(window, diff_window)
        near_a = [x for x in A.points if all(abs(_f(c)) <= dw for c in x)]
        near_b = [x for x in B.points if all(abs(_f(c)) <= dw for c in x)]
        gap = difference_profile(near_a, near_b, -1, dw).min_positive_gap if near_a and near_b else math.inf
        limit = min(sep / 2, gap / 2)
        idx = _nearest_origin(A)
        return cls(A, B, sep, gap, limit, A.points[idx], idx)


def _f(c) -> float:
    return to_float(c)[0] if isinstance(c, FieldElem) else float(c)


def _nearest_origin(S: PointSet) -> int:
    n2 = np.einsum("ij,ij->i", S.coords, S.coords)
    lo = n2.min()
    cand = np.nonzero(n2 <= lo * (1 + 1e-9) + 1e-12)[0]
    if S.exact:

        def key(i):
            x = S.points[i]
            return (sum((c * c for c in x[1:]), x[0] * x[0]), tuple(x))

        best = min(cand, key=lambda i: key(i)[0])
        ties = [i for i in cand if key(i)[0] == key(best)[0]]
        return min(ties, key=lambda i: tuple(S.points[i]))
    return int(min(cand, key=lambda i: tuple(S.coords[i])))


def snap_period(
    P1,
    P2,
    tau: Sequence[float],
    match_radius: float | None = None,
    window: float = 20.0,
    context: SnapContext | None = None,
) -> PeriodCertificate:
    """Turn an approximate period ``tau`` into an exact common period ``T`` or fail.

    The anchor is the point of ``P1`` nearest the origin; ``T = c - a`` for
    the unique ``c`` in ``P1`` within ``match_radius`` of ``a + tau``.  ``T``
    must map both sets into themselves on the window shrunk by ``|T|``.
    Failures raise :class:`PeriodError` with one of the codes ``no_match``,
    ``ambiguous_match``, ``verification_miss``, ``radius_too_large``.
    """
    ctx = context or SnapContext.build(P1, P2, window)
    if match_radius is None:
        match_radius = 0.9 * ctx.limit
    if not 0 < match_radius < ctx.limit:
        raise PeriodError(
            RADIUS_TOO_LARGE,
            f"match radius {match_radius} must be positive and below {ctx.limit:.6g} "
            f"(separation radius {ctx.separation:.6g}, difference gap {ctx.difference_gap:.6g})",
        )
    A = ctx.P1
    a = ctx.anchor
    target = A.coords[ctx.anchor_index] + np.asarray(tau, dtype=float)
    hits = A.tree.query_ball_point(target, match_radius)
    if not hits:
        raise PeriodError(NO_MATCH, f"no point within {match_radius} of anchor + tau", tau=tuple(tau))
    if len(hits) > 1:
        raise PeriodError(AMBIGUOUS_MATCH, f"{len(hits)} points within {match_radius}", tau=tuple(tau))
    c = A.points[hits[0]]
    T = tuple(u - v for u, v in zip(c, a)) if A.exact else tuple(float(u - v) for u, v in zip(c, a))
    tnorm = _norm(T)
    if tnorm == 0:
        raise PeriodError(NO_MATCH, "matched the anchor itself", tau=tuple(tau))
    if tnorm >= ctx.P1.window / 2:
        raise PeriodError(WINDOW_TOO_SMALL, f"|T| = {tnorm:.4g} leaves no room to verify", tau=tuple(tau))
    worst = 0.0
    for S in (ctx.P1, ctx.P2):
        misses, w = _translation_mismatch(S, T, tnorm, first_only=True)
        if misses:
            raise PeriodError(VERIFICATION_MISS, "translation by T misses points of a set", T=T, tau=tuple(tau))
        worst = max(worst, w)
    return PeriodCertificate(T, tuple(float(v) for v in tau), a, worst, A.window, match_radius)


def verify_period(P1, P2, T, window: float) -> bool:
    """Full (not early-exit) re-check of a period on both windowed sets."""
    A, B = _as_sets(P1, P2, window)
    tn = _norm(T)
    return all(_translation_mismatch(S, T, tn)[0] == 0 for S in (A, B))


def _candidates(S: PointSet, cone: ConeSpec, window: float, n_anchors: int = 16, limit: int = 96):
    """In-cone difference vectors ``b - a`` of ``S`` with ``1 <= |b - a| <= window/3``, shortest first."""
    X = S.coords
    order = np.argsort(np.einsum("ij,ij->i", X, X), kind="stable")[:n_anchors]
    reach = window / 3
    diffs = []
    for i in order:
        d = X - X[i]
        n = np.linalg.norm(d, axis=1)
        keep = (n >= 1 - 1e-9) & (n <= reach)
        d = d[keep]
        diffs.append(d[cone.contains(d)])
    D = np.concatenate(diffs) if diffs else np.zeros((0, S.coords.shape[1]))
    if not len(D):
        return D
    D = D[np.unique(np.round(D * 1e8).astype(np.int64), axis=0, return_index=True)[1]]
    n = np.round(np.linalg.norm(D, axis=1), 9)
    # equal norms: positive along the cone axis first
    idx = np.lexsort((*D.T[::-1], -D[:, cone.axis_index], n))
    return D[idx[:limit]]


def find_period_basis(
    P1,
    P2,
    cones: Sequence[ConeSpec] | None = None,
    window: float = 20.0,
    match_radius: float | None = None,
    context: SnapContext | None = None,
) -> list[PeriodCertificate]:
    """One verified common period with ``|T| >= 1`` in each cone, shortest candidate first."""
    ctx = context or SnapContext.build(P1, P2, window)
    p = ctx.P1.coords.shape[1]
    cones = list(cones) if cones is not None else default_cones(p)
    if len(cones) != p:
        raise ValueError(f"need exactly {p} cones")
    found = []
    for cone in cones:
        codes: dict[str, int] = {}
        cands = _candidates(ctx.P1, cone, ctx.P1.window)
        cert = None
        for tau in cands:
            try:
                c = snap_period(None, None, tau, match_radius, context=ctx)
            except PeriodError as e:
                codes[e.code] = codes.get(e.code, 0) + 1
                continue
            Tf = np.array([_f(v) for v in c.T])
            if np.linalg.norm(Tf) >= 1 - 1e-12 and cone.contains(Tf)[0]:
                cert = c
                break
            codes["outside_cone"] = codes.get("outside_cone", 0) + 1
        if cert is None:
            raise ConeExhausted(cone, len(cands), codes)
        found.append(cert)
    if _det([c.T for c in found]) == 0:
        raise PeriodError(VERIFICATION_MISS, "periods found in the cones are linearly dependent")
    return found


def _det(vectors):
    if isinstance(vectors[0][0], FieldElem):
        try:
            return mat_inv_det(tuple(zip(*vectors)))[1]
        except ValueError:
            return 0
    d = float(np.linalg.det(np.array(vectors, dtype=float).T))
    return 0 if abs(d) < 1e-12 else d


# -- coset structure ---------------------------------------------------------------------


@dataclass
class CosetDecomposition:
    lattice: object  # Lattice for exact inputs, float basis matrix (columns) otherwise
    residues_1: list
    residues_2: list
    window: float

    def to_json(self) -> dict:
        if isinstance(self.lattice, Lattice):
            basis = [[c.to_json() for c in col] for col in self.lattice.columns]
        else:
            basis = np.asarray(self.lattice).T.tolist()
        return {
            "basis_columns": basis,
            "residues_1": [[_coord_json(c) for c in x] for x in self.residues_1],
            "residues_2": [[_coord_json(c) for c in x] for x in self.residues_2],
            "window": self.window,
        }


def _residues(S: PointSet, L, window: float) -> list:
    inside = np.all(np.abs(S.coords) <= window + 1e-9, axis=1)
    if S.exact:
        W = Fraction(window)
        idx = [i for i in np.nonzero(inside)[0] if all(-W <= c <= W for c in S.points[i])] if window < S.window else list(range(len(S)))
        n = np.linalg.solve(L.float_basis(), S.coords[idx].T).T
        w = np.floor(n)
        # floor is decided exactly wherever rounding could flip it
        for k in np.nonzero(np.any(np.abs(n - np.rint(n)) < 1e-8, axis=1))[0]:
            w[k] = [math.floor(c) for c in L.coords(S.points[idx[k]])]
        cols = [_vec_ints(c, S.cloud.den) for c in L.columns]
        if any(c is None for c in cols):
            return sorted({reduce_mod(L, S.points[i])[0] for i in idx}, key=tuple)
        Ci = np.stack(cols, axis=1)  # (2p, p)
        wi = w.astype(np.int64)
        res = S.cloud.ints[idx] - wi @ Ci.T
        uniq = np.unique(res, axis=0)
        d, disc = S.cloud.den, S.points[0][0].disc
        p = uniq.shape[1] // 2
        return sorted(
            (tuple(FieldElem._raw(int(row[2 * k]), int(row[2 * k + 1]), d, disc) for k in range(p)) for row in uniq),
            key=tuple,
        )
    A = np.asarray(L, dtype=float)
    X = S.coords[inside]
    n = np.linalg.solve(A, X.T).T
    frac = n - np.floor(n)
    frac[frac > 1 - 1e-9] = 0.0
    snapped = np.unique(np.round(frac / 1e-9).astype(np.int64), axis=0)
    return [tuple(float(v) for v in A @ (row * 1e-9)) for row in snapped]


def coset_decompose(P1, P2, periods: Sequence, window: float = 20.0) -> CosetDecomposition:
    """Residues of both sets modulo the lattice spanned by ``periods``.

    The residue counts must agree between the full window and its half;
    otherwise :class:`CosetInstability` is raised.
    """
    A, B = _as_sets(P1, P2, window)
    if _det(list(periods)) == 0:
        raise ValueError("periods are linearly dependent")
    if A.exact:
        L = Lattice.from_columns(periods, A.points[0][0].disc)
    else:
        L = np.array(periods, dtype=float).T
    out = []
    for S in (A, B):
        full = _residues(S, L, window)
        half = _residues(S, L, window / 2)
        if len(full) != len(half):
            raise CosetInstability(f"not coset-finite in window: {len(full)} residues on the window, {len(half)} on its half")
        out.append(full)
    return CosetDecomposition(L, out[0], out[1], window)


def saturate_periods(P1, P2, periods: Sequence, window: float = 20.0) -> list:
    """Enlarge a period sublattice to all periods of the windowed sets.

    Periods found cone by cone may span a proper sublattice of the full
    period lattice; every candidate residue ``b - a`` of ``P1`` modulo the
    sublattice is tested as a period and the verified ones are added.  Exact
    inputs only.  Returns a basis (columns) of the enlarged lattice.
    """
    A, B = _as_sets(P1, P2, window)
    if not A.exact:
        return list(periods)
    disc = A.points[0][0].disc
    L0 = Lattice.from_columns(periods, disc)
    a = A.points[_nearest_origin(A)]
    cands = {}
    inner = Fraction(window / 2)
    for b in A.points:
        if all(-inner <= c <= inner for c in b):
            r, _ = reduce_mod(L0, tuple(u - v for u, v in zip(b, a)))
            if any(not c.is_zero() for c in r):
                cands.setdefault(r, None)
    coords = [[Fraction(int(i == j)) for j in range(L0.dim)] for i in range(L0.dim)]
    for r in cands:
        tn = _norm(r)
        if all(_translation_mismatch(S, r, tn, first_only=True)[0] == 0 for S in (A, B)):
            n = L0.coords(r)
            if all(c.is_rational() for c in n):
                coords.append([c.rat for c in n])
    basis = rational_module_basis(coords)
    return [_combine(L0, row) for row in basis]


def _combine(L: Lattice, coeffs) -> tuple:
    cols = L.columns
    out = None
    for c, col in zip(coeffs, cols):
        term = tuple(v * c for v in col)
        out = term if out is None else tuple(u + w for u, w in zip(out, term))
    return out


@dataclass
class Reconstruction:
    certificates: list
    periods: list
    decomposition: CosetDecomposition | None
    success: bool
    reason: str = ""
    assumption: str = "atom weights are assumed bounded away from zero on both supports"

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "reason": self.reason,
            "assumption": self.assumption,
            "certificates": [c.to_json() for c in self.certificates],
            "periods": [[_coord_json(c) for c in T] for T in self.periods],
            "decomposition": self.decomposition.to_json() if self.decomposition else None,
        }


def reconstruct(P1, P2, window: float = 20.0, cones=None, match_radius: float | None = None) -> Reconstruction:
    """Periods, saturated period lattice and coset residues, or a failure with its reason."""
    try:
        ctx = SnapContext.build(P1, P2, window)
        certs = find_period_basis(None, None, cones, window, match_radius, context=ctx)
    except (PeriodError, ConeExhausted) as e:
        return Reconstruction([], [], None, False, str(e))
    periods = [c.T for c in certs]
    periods = saturate_periods(ctx.P1, ctx.P2, periods, window)
    try:
        dec = coset_decompose(ctx.P1, ctx.P2, periods, window)
    except CosetInstability as e:
        return Reconstruction(certs, periods, None, False, str(e))
    return Reconstruction(certs, periods, dec, True)


# -- the counterexample ------------------------------------------------------------------


def nu(scale=None, disc: int = DEFAULT_DISC) -> Comb:
    """``sum delta_n`` over Z^2 plus ``sum (-1)^{m2} delta_(scale*m1, m2 + 1/2)``; scale defaults to sqrt 2.

    The second weight is written as ``exp(2 pi i (-1/4 + x2/2))``, which
    equals ``(-1)^{m2}`` at ``x2 = m2 + 1/2``.
    """
    s = FieldElem.sqrt(disc) if scale is None else field(scale, disc)
    half = Fraction(1, 2)
    second = coset_comb(Lattice.diagonal([s, 1], disc), (0, half), 1, Fraction(-1, 4), (0, half))
    return integer_comb(2, disc) + second


@dataclass(frozen=True)
class ExpectedCoset:
    lattice: Lattice
    offset: tuple
    modulus: FieldElem


def nu_hat_expected(disc: int = DEFAULT_DISC) -> list[ExpectedCoset]:
    """Support cosets of the transform with their atom moduli; phases are not asserted."""
    s = FieldElem.sqrt(disc)
    L = Lattice.diagonal([s, 1], disc)
    half = field(Fraction(1, 2), disc)
    zero = field(0, disc)
    return [
        ExpectedCoset(Lattice.integer(2, disc), (zero, zero), field(1, disc)),
        ExpectedCoset(dual(L), (zero, -half), s.inverse()),
    ]


def projection_cluster_certificate(
    theta: float, eps: float, window_cap: float = 1e6, scale=None, exclude_below: float | None = None
) -> tuple[tuple, tuple, float]:
    """Two points of supp nu whose projections on ``(cos t, sin t)`` differ by less than ``eps``.

    With ``p1 = (-r, 0)`` in Z^2 and ``p2 = (scale*s, 1/2)`` in the second
    coset the projected gap is ``-cos t * (s*scale + r + tan(t)/2)``, so a
    small inhomogeneous residual gives a small gap.  ``exclude_below`` asks
    for a gap strictly below a previous one.
    """
    c = math.cos(theta)
    if abs(c) < 1e-12:
        raise ValueError("vertical direction: projections are uniformly discrete")
    if not eps > 0:
        raise ValueError("eps must be positive")
    x = FieldElem.sqrt(DEFAULT_DISC) if scale is None else field(scale)
    bound = eps if exclude_below is None else min(eps, exclude_below * (1 - 1e-9))
    # tan(pi/4) is 0.999...9 in binary; a close rational keeps exact ties exact
    beta = Fraction(math.tan(theta)).limit_denominator(10**12) / 2
    s_cap = max(1, int(window_cap / max(float(x), 1e-12)))
    try:
        sol = best_inhomogeneous(x, beta, bound / abs(c), s_cap=s_cap, exclude_zero_residual=True)
    except CapExceeded as e:
        raise CapExceeded(f"theta={theta}: no cluster with |s| <= {s_cap} below {bound}", e.cap) from None
    p1 = (field(-sol.r), field(0))
    p2 = (x * sol.s, field(Fraction(1, 2)))
    gap = projection_gap(p1, p2, theta)
    if not 0 < gap < bound:
        raise CapExceeded(f"theta={theta}: candidate gap {gap} failed re-verification", s_cap)
    return p1, p2, gap


def projection_gap(p1, p2, theta: float, digits: int = 50) -> float:
    """``|<p1 - p2, (cos t, sin t)>|`` evaluated with ``digits`` decimal digits."""
    with mpmath.workdps(digits):
        t = mpmath.mpf(theta)
        u = (mpmath.cos(t), mpmath.sin(t))
        bits = int(digits * 3.4) + 16
        acc = mpmath.mpf(0)
        for a, b, w in zip(p1, p2, u):
            acc += to_float(a - b, bits)[0] * w
        return float(abs(acc))


@dataclass
class RefutationCertificate:
    theta: float
    eps_ladder: list
    pairs: list  # (p1, p2, gap)
    complete: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "eps_ladder": [repr(e) for e in self.eps_ladder],
            "complete": self.complete,
            "note": self.note,
            "pairs": [
                {"p1": [c.to_json() for c in p1], "p2": [c.to_json() for c in p2], "projection_gap": repr(g)}
                for p1, p2, g in self.pairs
            ],
        }


def default_theta_grid(n: int = 16) -> list[float]:
    """``n`` angles in ``(0, pi)`` avoiding ``pi/2``."""
    return [(k + 0.5) * math.pi / n for k in range(n)]


def default_eps_ladder(floor: float = 1e-4) -> list[float]:
    out, e = [], 0.5
    while e >= floor / 2:
        out.append(e)
        e /= 2
    return out


VERDICT_REFUTED = "cover refuted on sampled directions"
VERDICT_NOT_REFUTED = "cover NOT refuted"
ARGUMENT = (
    "If supp nu lay in finitely many translates of one full-rank lattice K, the projections of supp nu "
    "onto two independent directions would both be uniformly discrete. The vertical projection is "
    "(its values lie in (1/2)Z), but every sampled non-vertical direction carries pairs of distinct "
    "support points with projection gaps below every threshold of the ladder. This is a sampled "
    "refutation: it checks finitely many directions and thresholds, not every lattice K."
)


@dataclass
class RefutationReport:
    certificates: list
    control_gap: object
    control_window: float
    refuted: bool
    scale: str

    @property
    def verdict(self) -> str:
        return VERDICT_REFUTED if self.refuted else VERDICT_NOT_REFUTED

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "argument": ARGUMENT,
            "scale": self.scale,
            "control": {"theta": "pi/2", "window": self.control_window, "min_gap": str(self.control_gap)},
            "certificates": [c.to_json() for c in self.certificates],
        }

    def to_text(self) -> str:
        lines = [f"lattice-cover refutation (second coset scale {self.scale})"]
        for c in self.certificates:
            last = f"{c.pairs[-1][2]:.3e}" if c.pairs else "-"
            lines.append(f"  theta={c.theta:.6f} rungs={len(c.pairs)}/{len(c.eps_ladder)} smallest gap={last} {'ok' if c.complete else 'INCOMPLETE'}{' ' + c.note if c.note else ''}")
        lines.append(f"  control theta=pi/2: min projection gap {self.control_gap} on window {self.control_window}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def verify_certificate(cert: RefutationCertificate, scale=None) -> bool:
    """Independent re-check: membership in supp nu, distinctness and every gap bound."""
    m = nu(scale)
    prev = math.inf
    for (p1, p2, gap), e in zip(cert.pairs, cert.eps_ladder):
        if p1 == p2 or atom_weight(m, p1).is_zero() or atom_weight(m, p2).is_zero():
            return False
        g = projection_gap(p1, p2, cert.theta)
        if not (0 < g < e and g <= prev):
            return False
        prev = g
    return cert.complete == (len(cert.pairs) == len(cert.eps_ladder))


def refute_lattice_cover(
    theta_grid: Sequence[float] | None = None,
    eps_ladder: Sequence[float] | None = None,
    window_cap: float = 1e6,
    scale=None,
    control_window: float = 20.0,
) -> RefutationReport:
    thetas = list(theta_grid) if theta_grid is not None else default_theta_grid()
    ladder = list(eps_ladder) if eps_ladder is not None else default_eps_ladder()
    if not thetas or not ladder:
        raise ValueError("theta grid and eps ladder must be nonempty")
    if any(abs(math.cos(t)) < 1e-12 for t in thetas):
        raise ValueError("the vertical direction is the control, not a grid angle")
    certs = []
    for t in thetas:
        pairs, note = [], ""
        for e in ladder:
            if pairs and pairs[-1][2] < e:
                pairs.append(pairs[-1])  # the previous pair already clears this rung
                continue
            try:
                pairs.append(projection_cluster_certificate(t, e, window_cap, scale))
            except CapExceeded as err:
                note = str(err)
                break
        certs.append(RefutationCertificate(t, ladder, pairs, len(pairs) == len(ladder), note))
    m = nu(scale)
    pts = [x for x, _ in atoms_in_window(m, control_window)]
    vertical = project(pts, (field(0), field(1)))
    control = min_positive_gap_1d(vertical)
    refuted = all(c.complete for c in certs) and control == Fraction(1, 2)
    return RefutationReport(certs, control, control_window, refuted, "sqrt 2" if scale is None else str(scale))

