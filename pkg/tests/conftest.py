import random
from fractions import Fraction

import numpy as np
import pytest

from qcomb.comb import coset_comb, zero
from qcomb.exactnum import FieldElem
from qcomb.lattice import Lattice, enumerate_window, reduce_mod, same_coset

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(number, passed, detail):
        line = f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


# -- random exact objects -----------------------------------------------------------------


def rand_rat(rng, num=4, den=4):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_fe(rng, num=4, den=4, irr=True):
    return FieldElem(rand_rat(rng, num, den), rand_rat(rng, num, den) if irr and rng.random() < 0.6 else 0)


def rand_lattice(rng, dim, nice=False):
    while True:
        B = [[rand_fe(rng, 2, 2) for _ in range(dim)] for _ in range(dim)]
        try:
            L = Lattice(B)
        except ValueError:
            continue
        if not nice:
            return L
        s = np.linalg.svd(L.float_basis(), compute_uv=False)
        if 0.6 <= float(np.prod(s)) <= 2.0 and s[-1] >= 0.5:
            return L


def rand_unimodular(rng, dim, steps=6):
    U = [[int(i == j) for j in range(dim)] for i in range(dim)]
    for _ in range(steps):
        i, j = rng.sample(range(dim), 2) if dim > 1 else (0, 0)
        if i == j:
            U = [[-v for v in row] for row in U]
            continue
        k = rng.choice([-2, -1, 1, 2])
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
    return U


def rand_comb(rng, dim=None, max_cosets=3, max_terms=2):
    """Random canonical comb: one lattice, a few distinct cosets, a few weight terms each."""
    dim = dim or rng.randint(1, 3)
    L = rand_lattice(rng, dim)
    m = zero(dim)
    for _ in range(rng.randint(1, max_cosets)):
        offset = tuple(rand_fe(rng) for _ in range(dim))
        for _ in range(rng.randint(1, max_terms)):
            coeff = rand_fe(rng)
            if coeff.is_zero():
                coeff = FieldElem(1)
            m = m + coset_comb(L, offset, coeff, rand_fe(rng), tuple(rand_fe(rng) for _ in range(dim)))
    return m


def rand_residues(rng, L, k):
    """``k`` distinct residues mod ``L`` whose union has no extra period."""
    while True:
        res = []
        for _ in range(k):
            x = tuple(
                FieldElem(Fraction(rng.randint(0, 6), rng.randint(1, 7)), Fraction(rng.randint(0, 4), rng.randint(1, 5)))
                for _ in range(L.dim)
            )
            r, _ = reduce_mod(L, x)
            if r not in res:
                res.append(r)
        if len(res) < k:
            continue
        stable = False
        for f in res[1:]:
            d = tuple(a - b for a, b in zip(f, res[0]))
            if all(any(same_coset(L, tuple(a + b for a, b in zip(g, d)), h) for h in res) for g in res):
                stable = True
        if not stable:
            return res


def periodic_instance(rng, window=20):
    """Two finite unions of cosets of one random lattice over Q(sqrt 2), plus a disguised basis."""
    L = rand_lattice(rng, 2, nice=True)
    F1 = rand_residues(rng, L, rng.randint(1, 4))
    F2 = rand_residues(rng, L, rng.randint(1, 4))
    P1 = [x for f in F1 for x in enumerate_window(L, f, window)]
    P2 = [x for f in F2 for x in enumerate_window(L, f, window)]
    disguised = L.transformed(rand_unimodular(rng, 2))
    return disguised, F1, F2, P1, P2


@pytest.fixture
def rng():
    return random.Random(12345)
