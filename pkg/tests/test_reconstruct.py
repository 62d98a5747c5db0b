import json
import math
import random
from fractions import Fraction

import mpmath
import pytest

from conftest import periodic_instance
from oracles import brute_projection_cluster, fe_mp
from qcomb.comb import atom_weight, fourier
from qcomb.diophantine import KroneckerSystem, kronecker_solve
from qcomb.exactnum import FieldElem
from qcomb.lattice import Lattice, contains, enumerate_window, point, reduce_mod, same_coset, same_lattice
from qcomb.reconstruct import (
    VERDICT_NOT_REFUTED,
    VERDICT_REFUTED,
    ConeExhausted,
    ConeSpec,
    CosetInstability,
    PeriodError,
    SnapContext,
    coset_decompose,
    default_cones,
    default_eps_ladder,
    default_theta_grid,
    find_period_basis,
    nu,
    nu_hat_expected,
    projection_cluster_certificate,
    projection_gap,
    reconstruct,
    refute_lattice_cover,
    snap_period,
    verify_certificate,
    verify_period,
)

R2 = FieldElem(0, 1)
HALF = Fraction(1, 2)
Z1 = Lattice.integer(1)
Z2 = Lattice.integer(2)
LD = Lattice.diagonal([R2, 1])


def _nu_parts(W=20):
    return enumerate_window(Z2, point(0, 0), W), enumerate_window(LD, point(0, HALF), W)


def test_snap_examples():
    P1 = enumerate_window(Z1, point(0), 20)
    P2 = enumerate_window(Z1, point(Fraction(1, 3)), 20)
    cert = snap_period(P1, P2, (0.98,))
    assert cert.T == point(1) and cert.max_mismatch == 0
    Q = enumerate_window(Z2, point(0, 0), 20)
    assert snap_period(Q, Q, (1.02, -0.03)).T == point(1, 0)
    assert verify_period(Q, Q, point(1, 0), 20)
    assert not verify_period(Q, Q, point(HALF, 0), 20)


def test_snap_failure_codes():
    Q = enumerate_window(Z2, point(0, 0), 20)
    with pytest.raises(PeriodError) as e:
        snap_period(Q, Q, (0.5, 0.5))
    assert e.value.code == "no_match"
    with pytest.raises(PeriodError) as e:
        snap_period(Q, Q, (1.0, 0.0), match_radius=0.6)
    assert e.value.code == "radius_too_large"
    P2 = enumerate_window(Z2, point(0, 0), 20) + enumerate_window(Z2.scaled(2), point(HALF, 0), 20)
    with pytest.raises(PeriodError) as e:
        snap_period(Q, P2, (1.0, 0.0))
    assert e.value.code == "verification_miss"


def test_nu_parts_have_no_common_period():
    A, B = _nu_parts(40)
    ctx = SnapContext.build(A, B, 40)
    sols = kronecker_solve(KroneckerSystem([1, R2], [0, 0], 0.05), 19)
    taus = [(s.tau_float[0], 0.0) for s in sols if s.tau_float[0] != 0]
    taus += [(0.0, 0.5), (1.0, 1.0), (7.0, 0.02)]
    assert len(taus) >= 4
    for tau in taus:
        with pytest.raises(PeriodError) as e:
            snap_period(None, None, tau, context=ctx)
        assert e.value.code in {"verification_miss", "no_match", "ambiguous_match"}
    # the vertical unit vector is a genuine common period; only rank 2 fails
    assert snap_period(None, None, (0.0, 1.0), context=ctx).T == point(0, 1)
    with pytest.raises((ConeExhausted, PeriodError)):
        find_period_basis(A, B, window=20)
    rec = reconstruct(A, B, 20)
    assert not rec.success and rec.reason


def test_period_basis_examples():
    P1 = enumerate_window(Z2, point(0, 0), 20)
    P2 = enumerate_window(Z2, point(HALF, HALF), 20)
    certs = find_period_basis(P1, P2, [ConeSpec(0, 0.2), ConeSpec(1, 0.2)], 20)
    assert [c.T for c in certs] == [point(1, 0), point(0, 1)]
    P = enumerate_window(LD, point(0, 0), 20)
    certs = find_period_basis(P, P, window=20)
    assert [c.T for c in certs] == [point(R2, 0), point(0, 1)]
    assert all(c.max_mismatch == 0 for c in certs)


def test_cone_spec():
    with pytest.raises(ValueError):
        ConeSpec(0, 0.0)
    cones = default_cones(2)
    assert all(0 < c.aperture < 1 / (2 * math.sqrt(2)) for c in cones)


def test_coset_examples():
    P1 = enumerate_window(Z2, point(0, 0), 20)
    P2 = enumerate_window(Z2, point(HALF, HALF), 20)
    dec = coset_decompose(P1, P2, [point(1, 0), point(0, 1)], 20)
    assert dec.residues_1 == [point(0, 0)] and dec.residues_2 == [point(HALF, HALF)]
    P = [x for o in (0, Fraction(1, 3), Fraction(2, 5)) for x in enumerate_window(Z1, point(o), 20)]
    dec = coset_decompose(P, P, [point(1)], 20)
    assert dec.residues_1 == [point(0), point(Fraction(1, 3)), point(Fraction(2, 5))]
    json.dumps(dec.to_json())


def test_coset_instability():
    A, B = _nu_parts()
    with pytest.raises(CosetInstability):
        coset_decompose(A, B, [point(1, 0), point(0, 1)], 20)


@pytest.mark.parametrize("seed", range(10))
def test_reconstruct_random_disguised(seed):
    rng = random.Random(seed)
    L, F1, F2, P1, P2 = periodic_instance(rng)
    rec = reconstruct(P1, P2, 20)
    assert rec.success, rec.reason
    Lrec = Lattice.from_columns(rec.periods)
    assert same_lattice(Lrec, L)
    assert len(rec.decomposition.residues_1) == len(F1)
    assert len(rec.decomposition.residues_2) == len(F2)
    for r in rec.decomposition.residues_1:
        assert any(same_coset(L, r, f) for f in F1)
    # every input point reduces onto a listed residue
    listed = set(rec.decomposition.residues_1)
    for x in P1[:50]:
        assert reduce_mod(rec.decomposition.lattice, x)[0] in listed
    for c in rec.certificates:
        assert verify_period(P1, P2, c.T, 20)
        assert contains(L, c.T)


def test_saturation_recovers_index_two():
    # F1 forces the period (1/2, 1/2), which no cone reaches first
    P = enumerate_window(Z2, point(0, 0), 20) + enumerate_window(Z2, point(HALF, HALF), 20)
    rec = reconstruct(P, P, 20)
    assert rec.success
    assert same_lattice(Lattice.from_columns(rec.periods), Lattice.from_columns([point(1, 0), point(HALF, HALF)]))
    assert len(rec.decomposition.residues_1) == 1


def test_nu_structure():
    m = nu()
    assert complex(atom_weight(m, point(R2, Fraction(3, 2)))) == -1
    ft = fourier(m)
    expected = nu_hat_expected()
    assert len(ft.components) == len(expected) == 2
    for comp in ft.components:
        match = [e for e in expected if same_lattice(e.lattice, comp.lattice) and same_coset(comp.lattice, comp.offset, e.offset)]
        assert len(match) == 1
        for x in enumerate_window(comp.lattice, comp.offset, 2):
            w = atom_weight(ft, x)
            assert abs(abs(complex(w)) - float(match[0].modulus)) < 1e-15


def test_projection_cluster_examples():
    p1, p2, g = projection_cluster_certificate(math.pi / 4, 0.02)
    assert p1 == point(9, 0) and p2 == point(6 * R2, HALF)
    exact = abs(fe_mp(9 - 6 * R2 - HALF)) / mpmath.sqrt(2)
    assert abs(g - float(exact)) < 1e-15 and abs(g - 0.010408) < 1e-6
    p1, p2, g = projection_cluster_certificate(0.0, 0.1)
    assert p1 == point(7, 0) and p2 == point(5 * R2, HALF)
    assert abs(g - 0.0710678) < 1e-7
    with pytest.raises(ValueError):
        projection_cluster_certificate(math.pi / 2, 0.1)


@pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 4, 1.2, 2.0, 2.9])
@pytest.mark.parametrize("eps", [0.2, 0.05, 0.01])
def test_projection_cluster_matches_brute_force(theta, eps):
    ref = brute_projection_cluster(theta, eps, m_max=120)
    p1, p2, g = projection_cluster_certificate(theta, eps)
    s = p2[0].irr
    assert ref is not None
    assert abs(s) == abs(ref[1])
    assert abs(g - float(ref[2])) < 1e-12
    assert g == projection_gap(p1, p2, theta)


def test_ladder_gaps_decrease():
    cert = refute_lattice_cover([math.pi / 4], [2.0**-k for k in range(1, 12)]).certificates[0]
    distinct = []
    for p1, p2, g in cert.pairs:
        if not distinct or distinct[-1][:2] != (p1, p2):
            distinct.append((p1, p2, g))
    gaps = [g for _, _, g in distinct]
    sizes = [abs(float(p2[0])) for _, p2, _ in distinct]
    assert len(distinct) >= 4
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_refutation_default():
    rep = refute_lattice_cover()
    assert rep.verdict == VERDICT_REFUTED
    assert len(rep.certificates) == 16
    assert min(default_eps_ladder()) <= 1e-4
    assert all(c.complete and verify_certificate(c) for c in rep.certificates)
    assert rep.control_gap == HALF
    m = nu()
    for c in rep.certificates:
        for p1, p2, g in c.pairs:
            assert not atom_weight(m, p1).is_zero() and not atom_weight(m, p2).is_zero()
    json.dumps(rep.to_json())
    assert VERDICT_REFUTED in rep.to_text()


def test_refutation_grid_avoids_vertical():
    assert all(abs(math.cos(t)) > 0.01 for t in default_theta_grid())
    with pytest.raises(ValueError):
        refute_lattice_cover([math.pi / 2])


def test_rational_mutation_not_refuted():
    rep = refute_lattice_cover(scale=Fraction(3, 2))
    assert rep.verdict == VERDICT_NOT_REFUTED
    assert not any(c.complete for c in rep.certificates)


def test_tampered_certificate_rejected():
    cert = refute_lattice_cover([0.7], [0.1, 0.01]).certificates[0]
    assert verify_certificate(cert)
    p1, p2, g = cert.pairs[-1]
    cert.pairs[-1] = (p1, (p2[0] + 1, p2[1]), g)
    assert not verify_certificate(cert)
    cert.pairs[-1] = (point(HALF, 0), p2, g)
    assert not verify_certificate(cert)
