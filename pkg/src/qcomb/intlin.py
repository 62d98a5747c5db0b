"""Integer row reduction: echelon forms, integer solvability, lattice bases from generators."""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def row_echelon(rows: list[list[int]], track: bool = False):
    """Integer row echelon form by unimodular row operations.

    Returns ``(R, U)`` with ``U @ rows == R``; ``U`` is ``None`` unless
    ``track``.  Pivots are made positive and entries above each pivot are
    reduced into ``[0, pivot)``, so the nonzero rows of ``R`` are the Hermite
    normal form of the row lattice.
    """
    R = [list(r) for r in rows]
    n = len(R)
    m = len(R[0]) if R else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def combine(i, j, a, b, c, d):
        # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
        ri, rj = R[i], R[j]
        R[i] = [a * x + b * y for x, y in zip(ri, rj)]
        R[j] = [c * x + d * y for x, y in zip(ri, rj)]
        if U is not None:
            ui, uj = U[i], U[j]
            U[i] = [a * x + b * y for x, y in zip(ui, uj)]
            U[j] = [c * x + d * y for x, y in zip(ui, uj)]

    r = 0
    for col in range(m):
        if r >= n:
            break
        for i in range(r + 1, n):
            if R[i][col] == 0:
                continue
            x, y = R[r][col], R[i][col]
            g, s, t = _xgcd(x, y)
            combine(r, i, s, t, -y // g, x // g)
        if R[r][col] == 0:
            continue
        if R[r][col] < 0:
            R[r] = [-v for v in R[r]]
            if U is not None:
                U[r] = [-v for v in U[r]]
        piv = R[r][col]
        for i in range(r):
            k = R[i][col] // piv
            if k:
                R[i] = [a - k * b for a, b in zip(R[i], R[r])]
                if U is not None:
                    U[i] = [a - k * b for a, b in zip(U[i], U[r])]
        r += 1
    return R, U


def solve_integer(M: list[list[int]], b: list[int]) -> list[int] | None:
    """One integer solution ``z`` of ``M z = b`` or ``None`` when none exists."""
    m = len(M)
    n = len(M[0]) if M else 0
    cols = [[M[i][j] for i in range(m)] for j in range(n)]
    R, U = row_echelon(cols, track=True)
    # M @ U^T = R^T, so z = U^T y with sum_k y_k R[k] = b
    rem = list(b)
    y = [0] * n
    for k, row in enumerate(R):
        piv = next((j for j, v in enumerate(row) if v), None)
        if piv is None:
            break
        q, r = divmod(rem[piv], row[piv])
        if r:
            return None
        y[k] = q
        rem = [u - q * v for u, v in zip(rem, row)]
    if any(rem):
        return None
    return [sum(U[k][j] * y[k] for k in range(n)) for j in range(n)]


def rational_module_basis(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the Z-module generated by rational vectors (nonzero HNF rows)."""
    if not vectors:
        return []
    den = lcm(*(Fraction(v).denominator for vec in vectors for v in vec))
    rows = [[int(Fraction(v) * den) for v in vec] for vec in vectors]
    R, _ = row_echelon(rows)
    return [[Fraction(v, den) for v in row] for row in R if any(row)]


def integer_det(M: list[list[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1
