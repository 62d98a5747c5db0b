"""Weighted Dirac combs on lattice cosets and their exact Fourier transform.

A comb component on ``L + a`` carries the weight

    w(x) = sum_k c_k * exp(2*pi*i*(q_k + <omega_k, x>)),   x in L + a,

written in the absolute coordinate ``x``.  With the transform convention
``f^(y) = int f(x) exp(-2*pi*i*<x, y>) dx`` a single term transforms into a
single term on ``L* + omega`` with coefficient ``c / |det A|``, phase
``q + <a, omega>`` and frequency ``-a``, so the class is closed.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import DEFAULT_DISC, FieldElem, Phase, field, parse_rational, phase_value
from .intlin import solve_integer
from .lattice import (
    DEFAULT_POINT_CAP,
    Lattice,
    Point,
    WindowTooLarge,
    contains,
    det_abs,
    dual,
    enumerate_window,
    reduce_mod,
    same_coset,
    same_lattice,
)

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class OverlapError(ValueError):
    """Two components on distinct lattices have intersecting cosets."""


def dot(u: Sequence[FieldElem], v: Sequence[FieldElem]) -> FieldElem:
    return sum((a * b for a, b in zip(u[1:], v[1:])), u[0] * v[0])


def neg(v: Point) -> Point:
    return tuple(-c for c in v)


def sub(u: Point, v: Point) -> Point:
    return tuple(a - b for a, b in zip(u, v))


class Amplitude:
    """Exact complex number ``sum_j c_j exp(2*pi*i*t_j)``.

    Phases are keyed modulo 1/2 (the sign goes into the coefficient), so
    equal phases and opposite phases merge.  Vanishing sums of roots of
    unity with three or more distinct phases are not recognised as zero.
    """

    __slots__ = ("_parts", "disc")

    def __init__(self, disc: int = DEFAULT_DISC):
        self._parts: dict[FieldElem, FieldElem] = {}
        self.disc = disc

    def add(self, coeff: FieldElem, t: FieldElem) -> None:
        r = t.rat % 1
        sign = 1
        if r >= HALF:
            r -= HALF
            sign = -1
        key = FieldElem(r, t.irr, t.disc)
        c = self._parts.get(key)
        c = coeff * sign if c is None else c + coeff * sign
        if c.is_zero():
            self._parts.pop(key, None)
        else:
            self._parts[key] = c

    def is_zero(self) -> bool:
        return not self._parts

    def items(self) -> list[tuple[FieldElem, Phase]]:
        """Canonical ``(coeff > 0, phase)`` pairs, sorted."""
        out = []
        for key, c in self._parts.items():
            if c.sign() < 0:
                out.append((-c, Phase(key + HALF)))
            else:
                out.append((c, Phase(key)))
        out.sort(key=lambda cp: (cp[1].t.parts, cp[0].parts))
        return out

    def polar(self) -> tuple[FieldElem, Phase]:
        """``(coeff, phase)`` for a monomial amplitude; ``(0, Phase(0))`` for zero."""
        items = self.items()
        if not items:
            return FieldElem(0, 0, self.disc), Phase(0, self.disc)
        if len(items) > 1:
            raise ValueError("amplitude is a sum of several phases; use items()")
        return items[0]

    def __complex__(self) -> complex:
        return sum((float(c) * phase_value(p) for c, p in self.items()), 0j)

    def __eq__(self, other):
        if not isinstance(other, Amplitude):
            return NotImplemented
        return self._parts == other._parts

    def __repr__(self):
        return "Amplitude(" + " + ".join(f"{c}·e(2πi·{p.t})" for c, p in self.items()) + ")"


@dataclass(frozen=True)
class Term:
    coeff: FieldElem
    phase: Phase
    freq: Point

    def key(self):
        return (tuple(f.parts for f in self.freq), self.phase.t.parts, self.coeff.parts)


@dataclass(frozen=True)
class CombComponent:
    lattice: Lattice
    offset: Point
    terms: tuple[Term, ...]

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def weight_at(self, x: Point, amp: Amplitude | None = None) -> Amplitude:
        amp = amp if amp is not None else Amplitude(self.lattice.disc)
        for t in self.terms:
            amp.add(t.coeff, t.phase.t + dot(t.freq, x))
        return amp


def make_component(lattice: Lattice, offset: Point, terms: Iterable[Term]) -> CombComponent | None:
    """Canonical component: reduced offset, reduced frequencies, merged terms.

    Returns ``None`` when every term cancels.
    """
    disc = lattice.disc
    a, _ = reduce_mod(lattice, tuple(field(c, disc) for c in offset))
    L_dual = dual(lattice)
    groups: dict[Point, Amplitude] = {}
    for t in terms:
        freq = tuple(field(c, disc) for c in t.freq)
        if len(freq) != lattice.dim:
            raise ValueError("term frequency has the wrong dimension")
        w, _ = reduce_mod(L_dual, freq)
        eta = sub(freq, w)
        # exp(2πi<η, x>) = exp(2πi<η, a>) on L + a
        amp = groups.setdefault(w, Amplitude(disc))
        amp.add(t.coeff, t.phase.t + dot(eta, a))
    out = []
    for w, amp in groups.items():
        for c, p in amp.items():
            out.append(Term(c, p, w))
    if not out:
        return None
    out.sort(key=Term.key)
    return CombComponent(lattice, a, tuple(out))


def _cosets_intersect(c1: CombComponent, c2: CombComponent) -> bool:
    """Whether ``L1 + a1`` and ``L2 + a2`` share a point (integer linear system)."""
    p = c1.dim
    A1, A2 = c1.lattice.basis, c2.lattice.basis
    rhs = sub(c2.offset, c1.offset)
    M, b = [], []
    for i in range(p):
        coeffs = list(A1[i]) + [-v for v in A2[i]]
        for part in ("rat", "irr"):
            row = [getattr(v, part) for v in coeffs]
            r = getattr(rhs[i], part)
            den = math.lcm(*(v.denominator for v in row + [r]))
            M.append([int(v * den) for v in row])
            b.append(int(r * den))
    return solve_integer(M, b) is not None


@dataclass(frozen=True)
class Comb:
    """Finite sum of weighted lattice-coset Dirac combs in R^dim."""

    dim: int
    disc: int = DEFAULT_DISC
    components: tuple[CombComponent, ...] = dc_field(default=())

    @classmethod
    def build(cls, dim: int, disc: int, components: Iterable[CombComponent | None]) -> "Comb":
        merged: list[CombComponent] = []
        for comp in components:
            if comp is None:
                continue
            if comp.dim != dim or comp.lattice.disc != disc:
                raise ValueError("component dimension or field does not match the comb")
            for i, m in enumerate(merged):
                if same_lattice(m.lattice, comp.lattice) and same_coset(m.lattice, m.offset, comp.offset):
                    merged[i] = make_component(m.lattice, m.offset, m.terms + comp.terms)
                    break
            else:
                comp = make_component(comp.lattice, comp.offset, comp.terms)
                if comp is not None:
                    merged.append(comp)
            merged = [m for m in merged if m is not None]
        for i in range(len(merged)):
            for j in range(i + 1, len(merged)):
                ci, cj = merged[i], merged[j]
                if not same_lattice(ci.lattice, cj.lattice) and _cosets_intersect(ci, cj):
                    raise OverlapError(
                        f"cosets {ci.lattice}+{ci.offset} and {cj.lattice}+{cj.offset} intersect on distinct lattices"
                    )
        return cls(dim, disc, tuple(merged))

    def __add__(self, other: "Comb") -> "Comb":
        return add(self, other)

    def __neg__(self) -> "Comb":
        return scale(self, -1)

    def __sub__(self, other: "Comb") -> "Comb":
        return add(self, scale(other, -1))

    def is_empty(self) -> bool:
        return not self.components


def zero(dim: int, disc: int = DEFAULT_DISC) -> Comb:
    return Comb(dim, disc, ())


def coset_comb(lattice: Lattice, offset: Point | None = None, coeff=1, phase=0, freq: Point | None = None) -> Comb:
    """Single-term comb ``c * exp(2*pi*i*(q + <freq, x>))`` on ``lattice + offset``."""
    p, d = lattice.dim, lattice.disc
    offset = tuple(field(v, d) for v in offset) if offset is not None else tuple(field(0, d) for _ in range(p))
    freq = tuple(field(v, d) for v in freq) if freq is not None else tuple(field(0, d) for _ in range(p))
    c = field(coeff, d)
    ph = Phase(field(phase, d) if not isinstance(phase, Phase) else phase.t)
    if c.sign() < 0:
        c, ph = -c, ph.shift(HALF)
    terms = [] if c.is_zero() else [Term(c, ph, freq)]
    return Comb.build(p, d, [make_component(lattice, offset, terms)])


def integer_comb(dim: int, disc: int = DEFAULT_DISC) -> Comb:
    """``sum_{n in Z^dim} delta_n``."""
    return coset_comb(Lattice.integer(dim, disc))


def add(m1: Comb, m2: Comb) -> Comb:
    if m1.dim != m2.dim or m1.disc != m2.disc:
        raise ValueError("cannot add combs of different dimension or field")
    return Comb.build(m1.dim, m1.disc, m1.components + m2.components)


def scale(m: Comb, c) -> Comb:
    """Multiply every weight by the field element ``c``."""
    c = field(c, m.disc)
    if c.is_zero():
        return zero(m.dim, m.disc)
    flip = c.sign() < 0
    c = abs(c)
    comps = [
        CombComponent(
            comp.lattice,
            comp.offset,
            tuple(Term(t.coeff * c, t.phase.shift(HALF) if flip else t.phase, t.freq) for t in comp.terms),
        )
        for comp in m.components
    ]
    return Comb.build(m.dim, m.disc, comps)


def modulate(m: Comb, phase) -> Comb:
    """Multiply every weight by ``exp(2*pi*i*phase)``."""
    t = field(phase, m.disc)
    comps = [
        CombComponent(comp.lattice, comp.offset, tuple(Term(x.coeff, x.phase.shift(t), x.freq) for x in comp.terms))
        for comp in m.components
    ]
    return Comb.build(m.dim, m.disc, comps)


def atom_weight(m: Comb, x: Point) -> Amplitude:
    """Exact mass ``m({x})``, summed over every component containing ``x``."""
    x = tuple(field(v, m.disc) for v in x)
    amp = Amplitude(m.disc)
    for comp in m.components:
        if contains(comp.lattice, sub(x, comp.offset)):
            comp.weight_at(x, amp)
    return amp


def fourier(m: Comb) -> Comb:
    comps = []
    for comp in m.components:
        L, a = comp.lattice, comp.offset
        inv_det = det_abs(L).inverse()
        L_dual = dual(L)
        for t in comp.terms:
            term = Term(t.coeff * inv_det, t.phase.shift(dot(a, t.freq)), neg(a))
            comps.append(CombComponent(L_dual, t.freq, (term,)))
    return Comb.build(m.dim, m.disc, comps)


def reflect(m: Comb) -> Comb:
    """The measure ``E -> m(-E)``."""
    comps = [
        CombComponent(comp.lattice, neg(comp.offset), tuple(Term(t.coeff, t.phase, neg(t.freq)) for t in comp.terms))
        for comp in m.components
    ]
    return Comb.build(m.dim, m.disc, comps)


def conjugate(m: Comb) -> Comb:
    """Complex-conjugate every weight."""
    comps = [
        CombComponent(
            comp.lattice, comp.offset, tuple(Term(t.coeff, t.phase.conjugate(), neg(t.freq)) for t in comp.terms)
        )
        for comp in m.components
    ]
    return Comb.build(m.dim, m.disc, comps)


def comb_equal(m1: Comb, m2: Comb) -> bool:
    if m1.dim != m2.dim or m1.disc != m2.disc:
        raise ValueError("cannot compare combs of different dimension or field")
    if len(m1.components) != len(m2.components):
        return False
    unmatched = list(m2.components)
    for c1 in m1.components:
        for j, c2 in enumerate(unmatched):
            if same_lattice(c1.lattice, c2.lattice) and same_coset(c1.lattice, c1.offset, c2.offset):
                rebased = make_component(c1.lattice, c1.offset, c2.terms)
                if rebased is None or rebased.terms != c1.terms:
                    return False
                del unmatched[j]
                break
        else:
            return False
    return not unmatched


def is_real(m: Comb) -> bool:
    return comb_equal(conjugate(m), m)


def is_hermitian(m: Comb) -> bool:
    """``m(-z) == conj(m(z))`` for every atom."""
    return comb_equal(reflect(conjugate(m)), m)


def atoms_in_window(m: Comb, box_radius: float, cap: int = DEFAULT_POINT_CAP) -> list[tuple[Point, Amplitude]]:
    """Every atom with nonzero weight in ``[-R, R]^dim``, sorted by position."""
    acc: dict[Point, Amplitude] = {}
    total = 0
    for comp in m.components:
        pts = enumerate_window(comp.lattice, comp.offset, box_radius, cap)
        total += len(pts)
        if total > cap:
            raise WindowTooLarge(f"window holds more than {cap} atoms")
        for x in pts:
            amp = acc.get(x)
            if amp is None:
                amp = acc[x] = Amplitude(m.disc)
            comp.weight_at(x, amp)
    return sorted(((x, a) for x, a in acc.items() if not a.is_zero()), key=lambda xa: xa[0])


def support_cosets(m: Comb) -> list[tuple[Lattice, Point]]:
    return [(c.lattice, c.offset) for c in m.components]


# -- file format ----------------------------------------------------------------


class CombFormatError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _fe_json(x: FieldElem) -> dict:
    return x.to_json()


def comb_to_json(m: Comb) -> dict:
    return {
        "dim": m.dim,
        "disc": m.disc,
        "components": [
            {
                "basis": [[_fe_json(v) for v in col] for col in comp.lattice.columns],
                "offset": [_fe_json(v) for v in comp.offset],
                "terms": [
                    {"coeff": _fe_json(t.coeff), "phase": _fe_json(t.phase.t), "freq": [_fe_json(v) for v in t.freq]}
                    for t in comp.terms
                ],
            }
            for comp in m.components
        ],
    }


def dumps_comb(m: Comb) -> str:
    return json.dumps(comb_to_json(m), indent=1, sort_keys=True) + "\n"


def _parse_fe(obj, disc: int, ptr: str) -> FieldElem:
    if not isinstance(obj, dict):
        raise CombFormatError(ptr, "expected an object with 'rat' and 'irr'")
    for key in obj:
        if key not in ("rat", "irr"):
            raise CombFormatError(f"{ptr}/{key}", "unexpected key")
    vals = []
    for key in ("rat", "irr"):
        raw = obj.get(key, "0/1")
        if not isinstance(raw, str):
            raise CombFormatError(f"{ptr}/{key}", "rational must be a 'p/q' string")
        try:
            vals.append(parse_rational(raw))
        except ValueError as e:
            raise CombFormatError(f"{ptr}/{key}", str(e)) from None
    return FieldElem(vals[0], vals[1], disc)


def _parse_vec(obj, n: int, disc: int, ptr: str) -> Point:
    if not isinstance(obj, list) or len(obj) != n:
        raise CombFormatError(ptr, f"expected a list of {n} field elements")
    return tuple(_parse_fe(v, disc, f"{ptr}/{i}") for i, v in enumerate(obj))


def comb_from_json(doc) -> Comb:
    if not isinstance(doc, dict):
        raise CombFormatError("", "top level must be an object")
    dim, disc = doc.get("dim"), doc.get("disc", DEFAULT_DISC)
    if not isinstance(dim, int) or not 1 <= dim <= 4:
        raise CombFormatError("/dim", "dim must be an integer in 1..4")
    if not isinstance(disc, int):
        raise CombFormatError("/disc", "disc must be an integer")
    comps_raw = doc.get("components", [])
    if not isinstance(comps_raw, list):
        raise CombFormatError("/components", "expected a list")
    comps = []
    for i, c in enumerate(comps_raw):
        ptr = f"/components/{i}"
        if not isinstance(c, dict):
            raise CombFormatError(ptr, "expected an object")
        basis_raw = c.get("basis")
        if not isinstance(basis_raw, list) or len(basis_raw) != dim:
            raise CombFormatError(f"{ptr}/basis", f"expected {dim} basis columns")
        cols = [_parse_vec(col, dim, disc, f"{ptr}/basis/{j}") for j, col in enumerate(basis_raw)]
        try:
            lat = Lattice.from_columns(cols, disc)
        except (ValueError, ZeroDivisionError) as e:
            raise CombFormatError(f"{ptr}/basis", str(e)) from None
        offset = _parse_vec(c.get("offset"), dim, disc, f"{ptr}/offset")
        terms_raw = c.get("terms")
        if not isinstance(terms_raw, list):
            raise CombFormatError(f"{ptr}/terms", "expected a list")
        terms = []
        for k, t in enumerate(terms_raw):
            tptr = f"{ptr}/terms/{k}"
            if not isinstance(t, dict):
                raise CombFormatError(tptr, "expected an object")
            coeff = _parse_fe(t.get("coeff"), disc, f"{tptr}/coeff")
            phase = _parse_fe(t.get("phase", {"rat": "0/1", "irr": "0/1"}), disc, f"{tptr}/phase")
            freq = _parse_vec(t.get("freq"), dim, disc, f"{tptr}/freq")
            if coeff.sign() < 0:
                coeff, phase = -coeff, phase + HALF
            if not coeff.is_zero():
                terms.append(Term(coeff, Phase(phase), freq))
        comps.append(make_component(lat, offset, terms))
    try:
        m = Comb.build(dim, disc, comps)
    except OverlapError as e:
        raise CombFormatError("/components", str(e)) from None
    if comb_to_json(m) != doc:
        log.warning("comb input was not in canonical form; it has been canonicalized")
    return m


def loads_comb(text: str) -> Comb:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CombFormatError("", f"invalid JSON: {e}") from None
    return comb_from_json(doc)


def read_comb(path) -> Comb:
    with open(path, encoding="utf-8") as fh:
        return loads_comb(fh.read())


def write_comb(m: Comb, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_comb(m))
