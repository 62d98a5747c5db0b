import json
import logging
import random
from fractions import Fraction

import pytest

from conftest import rand_comb, rand_lattice, rand_unimodular
from oracles import nu_weight_direct
from qcomb.comb import (
    CombFormatError,
    OverlapError,
    add,
    atom_weight,
    atoms_in_window,
    comb_equal,
    comb_from_json,
    comb_to_json,
    conjugate,
    coset_comb,
    dumps_comb,
    fourier,
    integer_comb,
    is_hermitian,
    is_real,
    loads_comb,
    modulate,
    reflect,
    scale,
    zero,
)
from qcomb.exactnum import FieldElem, Phase
from qcomb.lattice import Lattice, dual, point
from qcomb.reconstruct import nu

R2 = FieldElem(0, 1)
HALF = Fraction(1, 2)
LD = Lattice.diagonal([R2, 1])


def test_nu_weights():
    m = nu()
    assert atom_weight(m, point(3 * R2, 5 + HALF)).polar() == (FieldElem(1), Phase(HALF))
    assert atom_weight(m, point(2, 3)).polar() == (FieldElem(1), Phase(0))
    assert atom_weight(m, point(HALF, 0)).is_zero()
    assert complex(atom_weight(m, point(R2, Fraction(3, 2)))) == -1


def test_nu_weights_match_definition():
    m = nu()
    for x, amp in atoms_in_window(m, 6):
        assert complex(amp) == nu_weight_direct(x)
    assert sum(1 for _ in atoms_in_window(m, 6)) == 13 * 13 + 9 * 12


def test_atoms_in_window_examples():
    atoms = dict(atoms_in_window(nu(), 1.6))
    assert complex(atoms[point(0, 0)]) == 1
    assert complex(atoms[point(0, HALF)]) == 1
    assert complex(atoms[point(0, -HALF)]) == -1
    assert atoms_in_window(zero(2), 5) == []
    assert len(atoms_in_window(integer_comb(2), 10.5)) == 441


def test_addition():
    z2 = integer_comb(2)
    two = z2 + z2
    assert len(two.components) == 1
    assert atom_weight(two, point(1, 1)).polar()[0] == 2
    assert comb_equal(add(z2, zero(2)), z2)
    assert (z2 - z2).is_empty()


def test_fourier_examples():
    for p in (1, 2, 3):
        assert comb_equal(fourier(integer_comb(p)), integer_comb(p))
    ft = fourier(coset_comb(LD))
    assert comb_equal(ft, coset_comb(dual(LD), None, 1 / R2))


def test_fourier_of_nu():
    ft = fourier(nu())
    comps = sorted(ft.components, key=lambda c: len(c.offset[1].parts))
    lat = {c.lattice for c in ft.components}
    assert Lattice.integer(2) in lat
    shifted = [c for c in ft.components if not c.offset[1].is_integer()]
    assert len(shifted) == 1 and shifted[0].offset == point(0, HALF)
    # atom value -i/sqrt 2 * (-1)^k2 at (k1/sqrt 2, k2 + 1/2)
    for k1 in range(-2, 3):
        for k2 in range(-2, 3):
            w = complex(atom_weight(ft, point(k1 * R2 / 2, k2 + HALF)))
            assert abs(w - (-1j / 2**0.5) * (-1) ** k2) < 1e-15
    assert is_hermitian(ft)
    assert is_real(nu())
    assert comps


def test_reflect_examples():
    z2 = integer_comb(2)
    assert comb_equal(reflect(z2), z2)
    c = coset_comb(LD, point(0, HALF))
    assert comb_equal(reflect(c), c)


def test_comb_equal_examples(rng):
    B = rand_lattice(rng, 2)
    assert comb_equal(coset_comb(B), coset_comb(B.transformed(rand_unimodular(rng, 2))))
    assert not comb_equal(integer_comb(2), coset_comb(Lattice.integer(2).scaled(2)))


def test_overlap_rejected():
    with pytest.raises(OverlapError):
        integer_comb(2) + coset_comb(Lattice.integer(2).scaled(2))


def test_scale_and_modulate():
    m = nu()
    assert comb_equal(scale(m, -1), -m)
    assert comb_equal(modulate(modulate(m, Fraction(1, 4)), Fraction(3, 4)), m)
    assert complex(atom_weight(modulate(m, Fraction(1, 4)), point(0, 0))) == 1j


@pytest.mark.parametrize("seed", range(40))
def test_random_comb_identities(seed):
    rng = random.Random(seed)
    m = rand_comb(rng)
    assert comb_equal(fourier(fourier(m)), reflect(m))
    assert comb_equal(reflect(reflect(m)), m)
    m2 = rand_comb(random.Random(seed + 1000), dim=m.dim)
    try:
        s = m + m2
    except OverlapError:
        return
    # the transforms may overlap even when m and m2 do not, so compare atoms
    try:
        fs = fourier(s)
    except OverlapError:
        return
    f1, f2 = fourier(m), fourier(m2)
    pts = {x for c in (fs, f1, f2) for x, _ in atoms_in_window(c, 1.0)}
    for x in sorted(pts)[:60]:
        lhs = complex(atom_weight(fs, x))
        assert abs(lhs - complex(atom_weight(f1, x)) - complex(atom_weight(f2, x))) < 1e-12
    real = m + conjugate(m)
    if not real.is_empty():
        assert is_real(real)
        assert is_hermitian(fourier(real))


@pytest.mark.parametrize("seed", range(10))
def test_serialization_round_trip(seed):
    m = rand_comb(random.Random(seed))
    text = dumps_comb(m)
    back = loads_comb(text)
    assert comb_equal(back, m)
    assert dumps_comb(back) == text


def test_parse_errors():
    doc = comb_to_json(nu())
    bad = json.loads(json.dumps(doc))
    bad["components"][1]["offset"][1]["rat"] = "1/0"
    with pytest.raises(CombFormatError) as e:
        comb_from_json(bad)
    assert e.value.pointer == "/components/1/offset/1/rat"
    with pytest.raises(CombFormatError) as e:
        loads_comb("{not json")
    with pytest.raises(CombFormatError) as e:
        comb_from_json({"dim": 7})
    assert e.value.pointer == "/dim"
    assert comb_from_json({"dim": 2, "disc": 2, "components": []}).is_empty()


def test_noncanonical_input_is_canonicalized(caplog):
    doc = comb_to_json(integer_comb(1))
    doc["components"][0]["offset"][0]["rat"] = "3/1"
    with caplog.at_level(logging.WARNING):
        m = comb_from_json(doc)
    assert comb_equal(m, integer_comb(1))
    assert "canonical" in caplog.text
