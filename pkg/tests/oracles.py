"""Brute-force references.

Nothing here calls the package's search or approximation routines; floats
are mpmath values at 50 digits and searches are exhaustive over small boxes.
"""

import itertools
from fractions import Fraction

import mpmath
import numpy as np

mpmath.mp.dps = 50
SQRT2 = mpmath.sqrt(2)


def fe_mp(x):
    """mpmath value of a FieldElem or rational."""
    if hasattr(x, "parts"):
        a, b, q = x.parts
        return (mpmath.mpf(a) + mpmath.mpf(b) * mpmath.sqrt(x.disc)) / q
    return mpmath.mpf(x.numerator) / x.denominator if hasattr(x, "numerator") else mpmath.mpf(x)


def dist_to_int(v):
    return abs(v - mpmath.nint(v))


def brute_homogeneous(x, eps, s_max=10_000):
    for s in range(1, s_max + 1):
        r = -int(mpmath.nint(s * x))
        if abs(s * x + r) < eps:
            return s, r
    return None


def brute_inhomogeneous(x, beta, eps, s_max=10_000):
    """Least |s| >= 1; ties to smaller |residual|, then positive s."""
    for k in range(1, s_max + 1):
        hits = []
        for s in (k, -k):
            v = s * x + beta
            r = -int(mpmath.nint(v))
            if abs(v + r) < eps:
                # exact ties must not be decided by rounding noise
                hits.append((int(mpmath.nint(abs(v + r) * 10**40)), -s, s, r))
        if hits:
            _, _, s, r = min(hits)
            return s, r
    return None


def theta_sum(n_max=40):
    """sum_n exp(-pi n^2)."""
    return mpmath.fsum(mpmath.exp(-mpmath.pi * n * n) for n in range(-n_max, n_max + 1))


def brute_min_gap(points):
    X = np.asarray(points, dtype=float)
    d = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    d[np.diag_indices(len(X))] = np.inf
    i, j = np.unravel_index(np.argmin(d), d.shape)
    return float(d[i, j]), (i, j)


def brute_shortest(basis_rows, K=6):
    """Shortest nonzero vector (squared norm) over coefficient box [-K, K]^n."""
    B = np.array(basis_rows, dtype=object)
    best = None
    for c in itertools.product(range(-K, K + 1), repeat=len(B)):
        if not any(c):
            continue
        v = sum(ci * B[i] for i, ci in enumerate(c))
        n = int(sum(int(t) * int(t) for t in v))
        if best is None or n < best:
            best = n
    return best


def brute_cvp(basis_rows, target, K=8):
    B = np.array(basis_rows, dtype=float)
    t = np.asarray(target, dtype=float)
    best = np.inf
    for c in itertools.product(range(-K, K + 1), repeat=len(B)):
        v = np.asarray(c) @ B
        best = min(best, float(np.linalg.norm(v - t)))
    return best


def nu_weight_direct(x):
    """Weight of the two-coset comb at an exact point, straight from its definition."""
    x1, x2 = x
    if x1.is_integer() and x2.is_integer():
        return 1
    shifted = x2.rat - Fraction(1, 2)
    if x1.rat == 0 and x1.irr.denominator == 1 and x2.is_rational() and shifted.denominator == 1:
        return -1 if int(shifted) % 2 else 1
    return 0


def brute_projection_cluster(theta, eps, m_max=10):
    """Least |m1| with a pair (n1, 0), (sqrt2 m1, 1/2) whose projections differ by < eps.

    Both signs of m1 are scanned; n1 runs over a box that holds every pair
    with gap below 1.
    """
    c, s = mpmath.cos(theta), mpmath.sin(theta)
    t = s / c
    reach = int(3 / abs(c)) + 3
    for k in range(1, m_max + 1):
        best = None
        for m1 in (k, -k):
            centre = int(mpmath.nint(SQRT2 * m1 + t / 2))
            for n1 in range(centre - reach, centre + reach + 1):
                g = abs(c * (n1 - SQRT2 * m1) - s / 2)
                if g < eps and (best is None or g < best[2]):
                    best = (n1, m1, g)
        if best is not None:
            return best
    return None


def integers_with_small_multiple(x, tol, radius):
    """Integers n with |n| <= radius and dist(n x, Z) < tol."""
    return [n for n in range(-radius, radius + 1) if dist_to_int(n * x) < tol]
