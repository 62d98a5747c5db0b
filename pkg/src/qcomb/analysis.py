"""Numeric pairings against Gaussian probes, atom oracle and discreteness diagnostics."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .comb import Comb, atoms_in_window, fourier
from .exactnum import FieldElem, to_float
from .lattice import DEFAULT_POINT_CAP, WindowTooLarge, enumerate_window_float, min_norm_lower_bound

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class GaussianProbe:
    """``f(x) = A * exp(-pi |(x - x0)/sigma|^2) * exp(2 pi i <x, xi>)``."""

    center: tuple[float, ...]
    width: float
    modulation: tuple[float, ...]
    amplitude: complex = 1.0 + 0j

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("probe width must be positive")
        if len(self.center) != len(self.modulation):
            raise ValueError("center and modulation must have the same dimension")

    @property
    def dim(self) -> int:
        return len(self.center)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        d = X - np.asarray(self.center)
        r2 = np.einsum("ij,ij->i", d, d) / self.width**2
        return self.amplitude * np.exp(-math.pi * r2 + 1j * TWO_PI * (X @ np.asarray(self.modulation)))

    def fourier(self) -> "GaussianProbe":
        """``f^(y) = A s^p exp(-pi s^2 |y - xi|^2) exp(-2 pi i <x0, y - xi>)``."""
        x0 = np.asarray(self.center)
        xi = np.asarray(self.modulation)
        amp = self.amplitude * self.width**self.dim * np.exp(1j * TWO_PI * float(x0 @ xi))
        return GaussianProbe(tuple(xi), 1.0 / self.width, tuple(-x0), complex(amp))

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "width": self.width,
            "modulation": list(self.modulation),
            "amplitude": [self.amplitude.real, self.amplitude.imag],
        }


def probe_panel(dim: int, n: int, seed: int, widths=(0.5, 1.0, 2.0), spread: float = 2.0) -> list[GaussianProbe]:
    """Deterministic panel of probes with random centers and modulations in ``[-spread, spread]^dim``."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        c = tuple(float(v) for v in rng.uniform(-spread, spread, dim))
        xi = tuple(float(v) for v in rng.uniform(-spread, spread, dim))
        out.append(GaussianProbe(c, float(widths[k % len(widths)]), xi))
    return out


# -- numeric pairing -----------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    value: complex
    error_bound: float
    cutoff: float
    atoms: int


def _float_components(m: Comb):
    out = []
    for comp in m.components:
        terms = [
            (to_float(t.coeff)[0], to_float(t.phase.t)[0], np.array([to_float(w)[0] for w in t.freq]))
            for t in comp.terms
        ]
        out.append(
            (
                comp.lattice,
                np.array([to_float(v)[0] for v in comp.offset]),
                terms,
                min_norm_lower_bound(comp.lattice),
            )
        )
    return out


def _tail_bound(R: float, width: float, dim: int, gap: float, mass: float) -> float:
    """Bound on ``sum_{|x - c| > R} mass * exp(-pi |x - c|^2 / width^2)`` over a ``gap``-separated set.

    Balls of radius gap/2 around the points of a shell are disjoint and lie in
    the shell thickened by gap/2, which bounds the count per shell.
    """
    step = width / 2
    h = gap / 2
    total = 0.0
    rho = R
    for _ in range(10_000):
        count = ((rho + step + h) ** dim - max(rho - h, 0.0) ** dim) / h**dim
        term = count * mass * math.exp(-math.pi * rho * rho / (width * width))
        total += term
        if term < 1e-300 or (rho > R + 4 * width and term < 1e-20 * max(total, 1e-300)):
            break
        rho += step
    return total


def pair_measure(m: Comb, f: GaussianProbe, tol: float, cap: int = DEFAULT_POINT_CAP) -> Pairing:
    """``sum_x m({x}) f(x)`` with a certified truncation tail below ``tol / 2``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if m.dim != f.dim:
        raise ValueError("probe and comb dimensions differ")
    comps = _float_components(m)
    if not comps:
        return Pairing(0j, 0.0, 0.0, 0)
    budget = tol / (2 * len(comps))
    re_parts: list[float] = []
    im_parts: list[float] = []
    abs_total = 0.0
    tail_total = 0.0
    n_atoms = 0
    cutoff = 0.0
    amp = abs(f.amplitude)
    for lattice, offset, terms, gap in comps:
        mass = sum(abs(c) for c, _, _ in terms) * amp
        R = f.width
        while _tail_bound(R, f.width, f.dim, gap, mass) > budget:
            R += f.width / 4
        cutoff = max(cutoff, R)
        tail_total += _tail_bound(R, f.width, f.dim, gap, mass)
        X = enumerate_window_float(lattice, offset, f.center, R * (1 + 1e-12), cap)
        n_atoms += len(X)
        if n_atoms > cap:
            raise WindowTooLarge(f"pairing needs more than {cap} atoms")
        if not len(X):
            continue
        w = np.zeros(len(X), dtype=complex)
        for c, q, omega in terms:
            arg = q + X @ omega
            arg -= np.floor(arg)
            w += c * np.exp(1j * TWO_PI * arg)
        vals = w * f(X)
        re_parts.extend(vals.real.tolist())
        im_parts.extend(vals.imag.tolist())
        abs_total += float(np.abs(vals).sum())
    value = complex(math.fsum(re_parts), math.fsum(im_parts))
    rounding = 16 * 2.0**-53 * abs_total
    return Pairing(value, tail_total + rounding, cutoff, n_atoms)


def apply_measure(m: Comb, f: GaussianProbe, tol: float = 1e-10, cap: int = DEFAULT_POINT_CAP) -> complex:
    return pair_measure(m, f, tol, cap).value


# -- Poisson check ---------------------------------------------------------------------


@dataclass
class ProbeResidual:
    probe: GaussianProbe
    lhs: complex  # m(f^)
    rhs: complex  # m^(f)
    residual: float
    passed: bool


@dataclass
class PoissonReport:
    tol: float
    entries: list[ProbeResidual] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "threshold": 2 * self.tol,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "probes": [
                {
                    "probe": e.probe.to_json(),
                    "lhs": [e.lhs.real, e.lhs.imag],
                    "rhs": [e.rhs.real, e.rhs.imag],
                    "residual": e.residual,
                    "passed": e.passed,
                }
                for e in self.entries
            ],
        }

    def to_text(self) -> str:
        lines = [f"poisson check: {len(self.entries)} probes, threshold {2 * self.tol:.3g}"]
        for i, e in enumerate(self.entries):
            flag = "ok" if e.passed else "FAIL"
            lines.append(f"  probe {i:2d} width={e.probe.width:g} residual={e.residual:.3e} {flag}")
        lines.append(f"  max residual {self.max_residual:.3e} -> {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def poisson_check(m: Comb, probes: Sequence[GaussianProbe], tol: float = 1e-9, transform: Comb | None = None) -> PoissonReport:
    """Compare ``m(f^)`` with ``fourier(m)(f)`` for every probe.

    ``transform`` overrides the symbolic transform, which lets a caller test
    a candidate (for instance a deliberately corrupted one).
    """
    fm = fourier(m) if transform is None else transform
    report = PoissonReport(tol)
    for f in probes:
        lhs = apply_measure(m, f.fourier(), tol)
        rhs = apply_measure(fm, f, tol)
        r = abs(lhs - rhs)
        report.entries.append(ProbeResidual(f, lhs, rhs, r, r < 2 * tol))
    return report


# -- atom oracle -------------------------------------------------------------------------

DEFAULT_SIGMA_LADDER = (0.4, 0.2, 0.1, 0.05)


class OracleDivergence(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    value: complex
    estimates: tuple[complex, ...]
    sigmas: tuple[float, ...]
    convergence: float  # |last - previous|

    def __complex__(self):
        return self.value


def atom_oracle(
    m: Comb,
    z: Sequence,
    sigma_ladder: Sequence[float] = DEFAULT_SIGMA_LADDER,
    tol: float = 1e-11,
    converge: float = 1e-6,
) -> OracleResult:
    """Numeric mass of ``fourier(m)`` at ``z``, using only ``m`` itself.

    For a probe ``g`` of width ``sigma`` centred at ``z``, ``m^(g) = m(g^)``
    and ``m^(g) -> m^({z})`` as ``sigma -> 0``; the error is
    exponentially small once ``sigma`` is well below the atom spacing, so the
    smallest-width estimate is reported when the last two agree.
    """
    zf = tuple(to_float(v)[0] if isinstance(v, FieldElem) else float(v) for v in z)
    zero = tuple(0.0 for _ in zf)
    estimates = []
    for s in sigma_ladder:
        g = GaussianProbe(zf, float(s), zero)
        estimates.append(apply_measure(m, g.fourier(), tol))
    diff = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else math.inf
    if not diff < converge:
        raise OracleDivergence(
            f"atom oracle at {zf} did not converge: last estimates {estimates[-2:]} differ by {diff:.3e}"
        )
    return OracleResult(estimates[-1], tuple(estimates), tuple(float(s) for s in sigma_ladder), diff)


# -- point clouds -------------------------------------------------------------------------


class PointCloud:
    """Exact or float points with vectorised exact bookkeeping.

    Exact coordinates ``(r + s sqrt d)/Q`` are stored as integer arrays over a
    common denominator so that equality and deduplication stay exact.
    """

    def __init__(self, points, window: float | None = None):
        pts = list(points)
        self.exact = bool(pts) and isinstance(pts[0][0], FieldElem)
        if not pts:
            self.points, self.coords, self.ints = [], np.zeros((0, 0)), None
            self.dim, self.den, self.disc = 0, None, None
            return
        if self.exact:
            self.disc = pts[0][0].disc
            self.dim = len(pts[0])
            den = 1
            for x in pts:
                for c in x:
                    den = math.lcm(den, c.parts[2])
            ints = [[v for c in x for v in (c.parts[0] * (den // c.parts[2]), c.parts[1] * (den // c.parts[2]))] for x in pts]
            big = max((abs(v) for row in ints for v in row), default=0) >= 2**60
            ints = np.array(ints, dtype=object if big else np.int64).reshape(len(pts), 2 * self.dim)
            coords = _int_coords(ints, den, self.disc)
            if window is not None:
                keep = np.all(np.abs(coords) <= window, axis=1)
                # rounding can only matter right at the boundary; settle those exactly
                W = Fraction(window)
                for i in np.nonzero(np.any(np.abs(np.abs(coords) - window) <= 1e-9 * (1 + window), axis=1))[0]:
                    keep[i] = all(-W <= c <= W for c in pts[i])
                idx = np.nonzero(keep)[0]
                pts = [pts[i] for i in idx]
                ints, coords = ints[idx], coords[idx]
            self.points = pts
            self.den = den
            self.ints = ints
            self.coords = coords
        else:
            arr = np.asarray(pts, dtype=float)
            if arr.ndim == 1:
                arr = arr.reshape(-1, 1)
            if window is not None and len(arr):
                arr = arr[np.all(np.abs(arr) <= window, axis=1)]
            self.points = [tuple(r) for r in arr]
            self.coords = arr
            self.dim = arr.shape[1] if arr.ndim == 2 and len(arr) else (arr.shape[1] if arr.ndim == 2 else 0)
            self.ints = None
            self.den = None
            self.disc = None

    def __len__(self):
        return len(self.points)


def _int_coords(ints: np.ndarray, den: int, disc: int) -> np.ndarray:
    """Float values of ``(r + s sqrt d)/den`` from interleaved integer columns."""
    r = ints[:, 0::2].astype(float)
    s = ints[:, 1::2].astype(float)
    return (r + s * math.sqrt(disc)) / den


def _exact_sqdist(x, y) -> FieldElem | float:
    if isinstance(x[0], FieldElem):
        return sum(((a - b) * (a - b) for a, b in zip(x[1:], y[1:])), (x[0] - y[0]) * (x[0] - y[0]))
    return float(sum((a - b) ** 2 for a, b in zip(x, y)))


def _sqrt_value(v) -> float:
    return math.sqrt(to_float(v)[0]) if isinstance(v, FieldElem) else math.sqrt(v)


def _min_pair(coords: np.ndarray, exact_points=None):
    """Closest distinct pair: float search, exact confirmation among near-ties."""
    tree = cKDTree(coords)
    d, _ = tree.query(coords, k=2)
    nn = d[:, 1]
    dmin = float(nn.min())
    pairs = tree.query_pairs(dmin * (1 + 1e-7) + 1e-12, output_type="ndarray")
    best = None
    for i, j in pairs:
        if exact_points is not None:
            v = _exact_sqdist(exact_points[i], exact_points[j])
        else:
            v = float(np.sum((coords[i] - coords[j]) ** 2))
        if best is None or v < best[0]:
            best = (v, int(i), int(j))
    return best


@dataclass
class DiscretenessProfile:
    min_gap: float
    fill_radius: float
    separation_radius: float
    window: float
    min_pair: tuple = ()
    min_gap_sq_exact: object = None

    def to_json(self) -> dict:
        d = {
            "min_gap": self.min_gap,
            "fill_radius": self.fill_radius,
            "separation_radius": self.separation_radius,
            "window": self.window,
            "min_pair": [[str(c) for c in x] for x in self.min_pair],
        }
        if isinstance(self.min_gap_sq_exact, FieldElem):
            d["min_gap_squared"] = self.min_gap_sq_exact.to_json()
        return d


def discreteness_profile(points, window: float, grid_points: int = 200_000, fill: bool = True) -> DiscretenessProfile:
    """Windowed separation and covering diagnostics.

    ``min_gap`` is exact (via its exact square) for exact inputs.  The fill
    radius is the largest distance from a grid point of the inner half-window
    to the set; the grid spacing is a multiple of 1/2 so lattice-aligned holes
    are sampled.
    """
    cloud = points if isinstance(points, PointCloud) else PointCloud(points, window)
    if len(cloud) < 2:
        raise ValueError("need at least two points inside the window")
    sq, i, j = _min_pair(cloud.coords, cloud.points if cloud.exact else None)
    gap = _sqrt_value(sq)
    p = cloud.dim
    if not fill:
        return DiscretenessProfile(gap, math.nan, gap / 2, window, (cloud.points[i], cloud.points[j]), sq if cloud.exact else None)
    half = window / 2
    per_axis = max(2, int(grid_points ** (1 / p)))
    h0 = window / per_axis
    h = 0.5 / math.ceil(0.5 / h0) if h0 < 0.5 else 0.5 * math.ceil(h0 / 0.5)
    ticks = np.arange(-math.floor(half / h) * h, half + 1e-12, h)
    grid = np.stack(np.meshgrid(*([ticks] * p), indexing="ij"), axis=-1).reshape(-1, p)
    dist, _ = cKDTree(cloud.coords).query(grid)
    fill = float(dist.max())
    return DiscretenessProfile(
        gap, fill, gap / 2, window, (cloud.points[i], cloud.points[j]), sq if cloud.exact else None
    )


# -- difference / mixed sets ---------------------------------------------------------------


@dataclass
class DifferenceProfile:
    values: np.ndarray  # distinct values, float coordinates, sorted lexicographically
    counts: np.ndarray
    min_positive_gap: float
    closest_pair: tuple = ()
    alpha: object = -1
    window: float = 0.0

    def to_json(self, max_values: int = 0) -> dict:
        return {
            "alpha": str(self.alpha),
            "window": self.window,
            "distinct_values": int(len(self.values)),
            "min_positive_gap": self.min_positive_gap,
            "closest_pair": [[str(c) for c in x] for x in self.closest_pair],
            "values": self.values[:max_values].tolist() if max_values else [],
        }


def _alpha_exact(alpha, disc):
    if isinstance(alpha, FieldElem):
        return alpha
    if isinstance(alpha, (int, Fraction)):
        return FieldElem(alpha, 0, disc)
    if isinstance(alpha, float) and alpha.is_integer():
        return FieldElem(int(alpha), 0, disc)
    return None


def difference_profile(points_a, points_b, alpha=-1, window: float = 20.0, chunk: int = 2048) -> DifferenceProfile:
    """Distinct values of ``a + alpha*b`` inside ``[-W, W]^p`` and their minimum gap.

    ``alpha = -1`` gives the difference set; exact inputs with ``alpha`` in the
    field are handled exactly, anything else (including complex ``alpha``) in
    floating point with values merged at 1e-9.
    """
    A = PointCloud(points_a, window)
    B = PointCloud(points_b, window)
    al = _alpha_exact(alpha, A.disc or 2) if A.exact and B.exact else None
    if al is not None and len(A) and len(B):
        return _difference_exact(A, B, al, window, chunk)
    return _difference_float(A, B, complex(alpha) if not isinstance(alpha, FieldElem) else float(alpha), window, chunk)


def _row_keys(rows: np.ndarray):
    """Injective int64 keys for integer rows when the ranges allow, else ``None``."""
    if rows.dtype == object or not len(rows):
        return None
    lo = rows.min(axis=0)
    span = rows.max(axis=0) - lo + 1
    if float(np.prod(span.astype(float))) >= 2.0**62:
        return None
    key = np.zeros(len(rows), dtype=np.int64)
    for k in range(rows.shape[1]):
        key = key * span[k] + (rows[:, k] - lo[k])
    return key


def _unique_rows(rows: np.ndarray, weights: np.ndarray | None = None):
    key = _row_keys(rows)
    if rows.dtype == object:
        index: dict = {}
        inv = np.array([index.setdefault(tuple(r), len(index)) for r in rows], dtype=np.int64)
        first = np.zeros(len(index), dtype=np.int64)
        first[inv[::-1]] = np.arange(len(rows))[::-1]
        uniq = rows[first]
    elif key is None:
        uniq, first, inv = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    else:
        _, first, inv = np.unique(key, return_index=True, return_inverse=True)
        uniq = rows[first]
    w = np.ones(len(rows), dtype=np.int64) if weights is None else weights
    counts = np.bincount(inv.ravel(), weights=w, minlength=len(uniq)).astype(np.int64)
    return uniq, counts


def _difference_exact(A: PointCloud, B: PointCloud, alpha: FieldElem, window: float, chunk: int) -> DifferenceProfile:
    d = A.disc
    p = A.dim
    u, v, w = alpha.parts  # alpha = (u + v sqrt d)/w
    Q = A.den * B.den * w
    Ai = A.ints
    Bi = B.ints
    bound = (int(np.abs(Ai).max()) * B.den * w + int(np.abs(Bi).max()) * (abs(u) + abs(v) * d) * A.den) * 2
    if bound >= 2**62:
        Ai, Bi = Ai.astype(object), Bi.astype(object)
    # b * alpha over B.den*w: (r + s√d)(u + v√d) = (ru + dsv) + (rv + su)√d
    Br, Bs = Bi[:, 0::2], Bi[:, 1::2]
    Bar = (Br * u + Bs * v * d) * A.den
    Bas = (Br * v + Bs * u) * A.den
    Ar = Ai[:, 0::2] * (B.den * w)
    As = Ai[:, 1::2] * (B.den * w)
    sq = math.sqrt(d)
    W = Fraction(window)
    step = max(1, min(chunk, 4_000_000 // max(1, len(B))))
    parts = []
    for start in range(0, len(A), step):
        r = (Ar[start : start + step, None, :] + Bar[None, :, :]).reshape(-1, p)
        s = (As[start : start + step, None, :] + Bas[None, :, :]).reshape(-1, p)
        fv = (r.astype(float) + s.astype(float) * sq) / Q
        keep = np.all(np.abs(fv) <= window + 1e-9, axis=1)
        rows = np.concatenate([r[keep], s[keep]], axis=1)
        if len(rows):
            parts.append(_unique_rows(rows))
    if not parts:
        return DifferenceProfile(np.zeros((0, p)), np.zeros(0, dtype=int), math.inf, (), alpha, window)
    uniq, counts = _unique_rows(np.concatenate([k for k, _ in parts]), np.concatenate([c for _, c in parts]))

    def exact(i):
        return tuple(FieldElem._raw(int(uniq[i, k]), int(uniq[i, p + k]), Q, d) for k in range(p))

    fvals = (uniq[:, :p].astype(float) + uniq[:, p:].astype(float) * sq) / Q
    # rows within rounding of the boundary are settled exactly
    border = np.nonzero(np.any(np.abs(np.abs(fvals) - window) <= 1e-9, axis=1))[0]
    drop = [i for i in border if not all(-W <= c <= W for c in exact(i))]
    keep = np.ones(len(uniq), dtype=bool)
    keep[drop] = False
    uniq, fvals, counts = uniq[keep], fvals[keep], counts[keep]
    order = np.lexsort(fvals.T[::-1])
    uniq, fvals, counts = uniq[order], fvals[order], counts[order]
    if len(fvals) < 2:
        return DifferenceProfile(fvals, counts, math.inf, (), alpha, window)
    sqd, i, j = _min_pair(fvals, _LazyPoints(exact, len(fvals)))
    return DifferenceProfile(fvals, counts, _sqrt_value(sqd), (exact(i), exact(j)), alpha, window)


class _LazyPoints:
    def __init__(self, fn, n):
        self.fn, self.n = fn, n

    def __getitem__(self, i):
        return self.fn(int(i))

    def __len__(self):
        return self.n


def _difference_float(A: PointCloud, B: PointCloud, alpha: complex, window: float, chunk: int) -> DifferenceProfile:
    p = A.dim or B.dim
    complex_alpha = alpha.imag != 0
    Ac, Bc = A.coords, B.coords
    vals = []
    for start in range(0, len(Ac), chunk):
        z = (Ac[start : start + chunk, None, :] + alpha * Bc[None, :, :]).reshape(-1, p)
        keep = np.all(np.abs(z) <= window + 1e-9, axis=1)
        z = z[keep]
        vals.append(np.concatenate([z.real, z.imag], axis=1) if complex_alpha else z.real)
    if not vals or not sum(len(v) for v in vals):
        return DifferenceProfile(np.zeros((0, p)), np.zeros(0, dtype=int), math.inf, (), alpha, window)
    allv = np.concatenate(vals)
    snapped = np.round(allv / 1e-9).astype(np.int64)
    _, first, inv = np.unique(snapped, axis=0, return_index=True, return_inverse=True)
    counts = np.bincount(inv.ravel())
    fvals = allv[first]
    order = np.lexsort(fvals.T[::-1])
    fvals, counts = fvals[order], counts[order]
    if len(fvals) < 2:
        return DifferenceProfile(fvals, counts, math.inf, (), alpha, window)
    sqd, i, j = _min_pair(fvals)
    return DifferenceProfile(fvals, counts, math.sqrt(sqd), (tuple(fvals[i]), tuple(fvals[j])), alpha, window)


# -- projections and the idempotent polynomial ----------------------------------------------


def direction_vector(theta: float) -> tuple[float, float]:
    return (math.cos(theta), math.sin(theta))


def project(points, direction) -> list:
    """Inner products with a direction.

    ``direction`` is an angle (plane only, float results) or a vector; an
    exact vector of field elements with exact points gives exact values.
    """
    pts = list(points)
    if isinstance(direction, (int, float)):
        u = direction_vector(float(direction))
        return [float(sum(float(c) * w for c, w in zip(x, u))) for x in pts]
    u = tuple(direction)
    if pts and isinstance(pts[0][0], FieldElem) and all(isinstance(w, (FieldElem, int, Fraction)) for w in u):
        return [sum((c * w for c, w in zip(x[1:], u[1:])), x[0] * u[0]) for x in pts]
    uf = np.array([float(w) for w in u])
    return [float(np.dot([float(c) for c in x], uf)) for x in pts]


def min_positive_gap_1d(values) -> object:
    """Smallest positive difference between sorted distinct values (exact when values are)."""
    vals = sorted(set(values))
    if len(vals) < 2:
        return math.inf
    return min(b - a for a, b in zip(vals, vals[1:]))


def idempotent_indicator(moduli: Sequence[float], z: complex) -> complex:
    """``P(z, conj z) = 1 - prod_j (1 - z conj(z) / beta_j^2)``."""
    if any(not b > 0 for b in moduli):
        raise ValueError("moduli must be positive")
    zz = z * z.conjugate() if isinstance(z, complex) else z * z
    prod = 1.0 + 0j
    for b in moduli:
        prod *= 1 - zz / (b * b)
    return complex(1 - prod)


def support_points(m: Comb, window: float, cap: int = DEFAULT_POINT_CAP) -> list:
    return [x for x, _ in atoms_in_window(m, window, cap)]


def profile_as_dict(p: DiscretenessProfile) -> dict:
    return asdict(p)
