import itertools
from fractions import Fraction

from hypothesis import given, strategies as st

from qcomb.intlin import integer_det, rational_module_basis, row_echelon, solve_integer

small = st.integers(-6, 6)
matrices = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(lambda m: st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n))
)


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([r[:j] + r[j + 1 :] for r in M[1:]]) for j in range(n))


@given(matrices)
def test_echelon_is_unimodular_transform(M):
    R, U = row_echelon(M, track=True)
    assert _matmul(U, M) == R
    assert abs(_det(U)) == 1
    pivots = [next((j for j, v in enumerate(r) if v), None) for r in R]
    nz = [p for p in pivots if p is not None]
    assert nz == sorted(nz) and len(set(nz)) == len(nz)
    assert pivots[len(nz) :] == [None] * (len(R) - len(nz))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_integer_det(M):
    assert integer_det(M) == _det(M)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=3), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_solve_integer_matches_search(cols, b):
    M = [[c[i] for c in cols] for i in range(2)]
    z = solve_integer(M, b)
    brute = None
    for cand in itertools.product(range(-12, 13), repeat=len(cols)):
        if [sum(M[i][j] * cand[j] for j in range(len(cols))) for i in range(2)] == b:
            brute = cand
            break
    if z is None:
        assert brute is None
    else:
        assert [sum(M[i][j] * z[j] for j in range(len(cols))) for i in range(2)] == b


def test_module_basis_saturates():
    vecs = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)], [Fraction(1, 2), Fraction(1)]]
    basis = rational_module_basis(vecs)
    assert len(basis) == 2
    assert abs(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]) == 1
