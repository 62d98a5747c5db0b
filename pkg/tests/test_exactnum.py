import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from oracles import fe_mp
from qcomb.exactnum import (
    DiscMismatch,
    FieldElem,
    Phase,
    field,
    format_rational,
    parse_rational,
    phase_value,
    sign_of,
    to_float,
)

R2 = FieldElem(0, 1)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=40)
elems = st.builds(FieldElem, rats, rats)
nonzero = elems.filter(lambda x: not x.is_zero())


def test_products_and_inverse():
    assert (1 + R2) * (-1 + R2) == 1
    assert 1 / R2 == FieldElem(0, Fraction(1, 2))
    assert FieldElem(Fraction(1, 2)) + R2 == FieldElem(Fraction(1, 2), 1)


def test_errors():
    with pytest.raises(ZeroDivisionError):
        R2 / FieldElem(0)
    with pytest.raises(DiscMismatch):
        R2 + FieldElem(0, 1, 3)
    with pytest.raises(TypeError):
        field(0.5)


def test_rational_text():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert format_rational(Fraction(-4, 2)) == "-2/1"
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_signs():
    assert sign_of(-1 + R2) == 1
    assert sign_of(3 - 2 * R2) == 1
    assert sign_of(FieldElem(0)) == 0
    assert sign_of(2 * R2 - 3) == -1


def test_to_float_examples():
    v, err = to_float(R2)
    assert v == 1.4142135623730951 and err <= 2.0**-52
    assert to_float(FieldElem(Fraction(1, 2))) == (0.5, 0.0)
    v, err = to_float(41 - 29 * R2)
    # 41/29 is a convergent, so the value is tiny and negative
    assert abs(v - float(41 - 29 * mpmath.sqrt(2))) <= err
    assert -0.01220 < v < -0.01219


def test_phase_values():
    assert phase_value(Phase(Fraction(3, 2))) == -1
    assert phase_value(Phase(Fraction(1, 4))) == 1j
    z = phase_value(Phase(R2))
    ref = mpmath.expjpi(2 * mpmath.sqrt(2))
    assert abs(z - complex(ref)) < 1e-15
    assert abs(z - (-0.858216 + 0.513288j)) < 1e-6


def test_floor_round():
    assert math.floor(R2) == 1 and math.floor(-R2) == -2
    assert round(29 * R2) == 41
    assert math.ceil(R2) == 2


@settings(max_examples=200)
@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0


@given(nonzero)
def test_inverse_round_trip(a):
    assert a * (1 / a) == 1
    assert a.norm() == (a * a.conjugate()).rat


@given(elems, elems)
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()


@settings(max_examples=300)
@given(elems)
def test_sign_and_floor_against_high_precision(a):
    v = fe_mp(a)
    assert sign_of(a) == (0 if a.is_zero() else (1 if v > 0 else -1))
    f = math.floor(a)
    assert f <= v < f + 1
    approx, bound = to_float(a)
    assert abs(mpmath.mpf(approx) - v) <= bound + mpmath.mpf(10) ** -40


@given(elems, elems)
def test_comparisons_consistent(a, b):
    assert (a < b) == (fe_mp(a) < fe_mp(b))
    assert (a == b) == (a - b).is_zero()


@given(elems)
def test_phase_reduction(t):
    p = Phase(t)
    assert p.reduce() == p and p.reduce().reduce() == p.reduce()
    assert Phase(t + 7) == p
    assert abs(phase_value(p) - complex(mpmath.expjpi(2 * fe_mp(t)))) < 1e-14


def test_json_round_trip():
    x = FieldElem(Fraction(-3, 7), Fraction(5, 2))
    assert FieldElem.from_json(x.to_json(), 2) == x
    with pytest.raises(ValueError):
        FieldElem.from_json({"rat": "1/0"}, 2)
