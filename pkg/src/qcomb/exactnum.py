"""Exact arithmetic in a real quadratic field Q(sqrt d) and exact unimodular phases.

A :class:`FieldElem` stores the value ``(a + b*sqrt(d)) / q`` as three Python
integers with ``q > 0`` and ``gcd(a, b, q) == 1``, which makes the
representation canonical and equality structural.  Comparisons and floors
are decided with integer arithmetic only.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

import mpmath

Rational = Fraction

DEFAULT_DISC = 2


class DiscMismatch(ValueError):
    """Raised when elements of different quadratic fields are combined."""


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` (or a plain integer) into a Fraction.

    Decimal and float notation is rejected so that files stay bit-exact.
    """
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in rational {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class FieldElem:
    """Element ``rat + irr*sqrt(disc)`` of Q(sqrt disc)."""

    __slots__ = ("_a", "_b", "_q", "_d")

    def __init__(self, rat=0, irr=0, disc: int = DEFAULT_DISC):
        if not isinstance(disc, int) or disc < 2 or not is_squarefree(disc):
            raise ValueError(f"disc must be a square-free integer >= 2, got {disc!r}")
        r = _as_fraction(rat)
        s = _as_fraction(irr)
        q = r.denominator * s.denominator // math.gcd(r.denominator, s.denominator)
        self._set(r.numerator * (q // r.denominator), s.numerator * (q // s.denominator), q, disc)

    def _set(self, a: int, b: int, q: int, d: int) -> None:
        if q < 0:
            a, b, q = -a, -b, -q
        g = math.gcd(a, b, q)
        if g > 1:
            a //= g
            b //= g
            q //= g
        self._a, self._b, self._q, self._d = a, b, q, d

    @classmethod
    def _raw(cls, a: int, b: int, q: int, d: int) -> "FieldElem":
        obj = object.__new__(cls)
        obj._set(a, b, q, d)
        return obj

    @classmethod
    def sqrt(cls, disc: int = DEFAULT_DISC) -> "FieldElem":
        return cls(0, 1, disc)

    # -- accessors -----------------------------------------------------------

    @property
    def rat(self) -> Fraction:
        return Fraction(self._a, self._q)

    @property
    def irr(self) -> Fraction:
        return Fraction(self._b, self._q)

    @property
    def disc(self) -> int:
        return self._d

    @property
    def parts(self) -> tuple[int, int, int]:
        """Canonical integer triple ``(a, b, q)`` with value ``(a + b*sqrt d)/q``."""
        return self._a, self._b, self._q

    def is_rational(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._q == 1

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other) -> "FieldElem | None":
        if isinstance(other, FieldElem):
            if other._d != self._d:
                raise DiscMismatch(f"Q(sqrt {self._d}) and Q(sqrt {other._d}) do not mix")
            return other
        if isinstance(other, int):
            return FieldElem._raw(other, 0, 1, self._d)
        if isinstance(other, Fraction):
            return FieldElem._raw(other.numerator, 0, other.denominator, self._d)
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        q = self._q * o._q
        return FieldElem._raw(self._a * o._q + o._a * self._q, self._b * o._q + o._b * self._q, q, self._d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem._raw(-self._a, -self._b, self._q, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        return FieldElem._raw(a1 * a2 + self._d * b1 * b2, a1 * b2 + a2 * b1, self._q * o._q, self._d)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElem":
        """Galois conjugate ``a - b*sqrt(d)``."""
        return FieldElem._raw(self._a, -self._b, self._q, self._d)

    def norm(self) -> Fraction:
        """Field norm ``x * conj(x)``, a rational."""
        return Fraction(self._a * self._a - self._d * self._b * self._b, self._q * self._q)

    def inverse(self) -> "FieldElem":
        n = self._a * self._a - self._d * self._b * self._b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        # 1/((a+b√d)/q) = q(a-b√d)/(a²-db²)
        return FieldElem._raw(self._q * self._a, -self._q * self._b, n, self._d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElem._raw(1, 0, 1, self._d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ---------------------------------------------------------------

    def sign(self) -> int:
        return sign_of(self)

    def __abs__(self):
        return -self if sign_of(self) < 0 else self

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare FieldElem with {type(other).__name__}")
        return sign_of(self - o)

    def __lt__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            if other._d != self._d:
                return self._b == 0 and other._b == 0 and self._a * other._q == other._a * self._q
            return self._a == other._a and self._b == other._b and self._q == other._q
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._q) == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._q))
        return hash((self._a, self._b, self._q, self._d))

    def __floor__(self) -> int:
        if self._b == 0:
            return self._a // self._q
        r = math.isqrt(self._b * self._b * self._d)
        fl = r if self._b > 0 else -r - 1
        # a + b√d lies strictly inside (a + fl, a + fl + 1), so flooring by q is exact
        return (self._a + fl) // self._q

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def __round__(self, ndigits=None) -> int:
        """Nearest integer, halves rounded up."""
        if ndigits is not None:
            raise TypeError("FieldElem only rounds to an integer")
        return math.floor(self + Fraction(1, 2))

    def frac(self) -> "FieldElem":
        """Fractional part ``x - floor(x)``, in [0, 1)."""
        return self - math.floor(self)

    def __float__(self) -> float:
        return to_float(self)[0]

    # -- display -------------------------------------------------------------

    def __repr__(self):
        return f"FieldElem({format_rational(self.rat)!r}, {format_rational(self.irr)!r}, disc={self._d})"

    def __str__(self):
        r, s = self.rat, self.irr
        if s == 0:
            return str(r)
        irr = f"√{self._d}" if s == 1 else f"-√{self._d}" if s == -1 else f"({s})√{self._d}"
        if r == 0:
            return irr
        return f"{r} + {irr}" if not irr.startswith("-") else f"{r} - {irr[1:]}"

    def to_json(self) -> dict:
        return {"rat": format_rational(self.rat), "irr": format_rational(self.irr)}

    @classmethod
    def from_json(cls, obj: dict, disc: int) -> "FieldElem":
        if not isinstance(obj, dict) or set(obj) - {"rat", "irr"}:
            raise ValueError(f"field element must be an object with 'rat'/'irr', got {obj!r}")
        return cls(parse_rational(str(obj.get("rat", "0/1"))), parse_rational(str(obj.get("irr", "0/1"))), disc)


def field(x, disc: int = DEFAULT_DISC) -> FieldElem:
    """Coerce an int, Fraction, ``"p/q"`` string or FieldElem into Q(sqrt disc)."""
    if isinstance(x, FieldElem):
        if x.disc != disc:
            raise DiscMismatch(f"expected disc {disc}, got {x.disc}")
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a 'p/q' string")
    return FieldElem(x, 0, disc)


def sign_of(x: FieldElem) -> int:
    """Exact sign of ``(a + b*sqrt d)/q`` using integer comparisons only."""
    a, b, _ = x.parts
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    bigger_rat = a * a > b * b * x.disc
    if a > 0:
        return 1 if bigger_rat else -1
    return -1 if bigger_rat else 1


def to_float(x: FieldElem, precision_bits: int = 53):
    """Approximate ``x`` with a rigorous absolute error bound.

    Returns ``(approx, error_bound)`` where ``approx`` is a float for
    ``precision_bits <= 53`` and an ``mpmath.mpf`` otherwise.
    """
    if precision_bits < 24:
        raise ValueError("precision_bits must be >= 24")
    a, b, q = x.parts
    if b == 0:
        exact = Fraction(a, q)
        err = Fraction(0)
    else:
        # enough fractional bits that the truncated value keeps precision_bits + 20
        # significant bits even after cancellation, so rounding it is almost always exact
        k = precision_bits + 20
        while True:
            s = math.isqrt(b * b * x.disc << (2 * k))
            num = (a << k) + (s if b > 0 else -s)
            if abs(num) >= q << (precision_bits + 20) or k > 4096:
                break
            k += max(precision_bits + 20 - abs(num).bit_length() + q.bit_length(), 8)
        exact = Fraction(num, q << k)
        # floor error of isqrt is below one unit in the last place
        err = Fraction(1, q << k)
    if precision_bits <= 53:
        approx = float(exact)
        err += abs(Fraction(approx) - exact)
        bound = float(err)
        if Fraction(bound) < err:
            bound = math.nextafter(bound, math.inf)
        return approx, bound
    with mpmath.workprec(precision_bits + 10):
        approx = mpmath.mpf(exact.numerator) / exact.denominator
        rounding = abs(approx) * mpmath.mpf(2) ** (-(precision_bits + 9))
        bound = mpmath.mpf(err.numerator) / err.denominator + rounding
    return approx, bound


class Phase:
    """The unimodular number ``exp(2*pi*i*t)`` with ``t`` in Q(sqrt d).

    ``t`` is stored with its rational part reduced into [0, 1), so two
    phases are equal exactly when their stored values coincide.
    """

    __slots__ = ("t",)

    def __init__(self, t=0, disc: int = DEFAULT_DISC):
        t = field(t, disc) if not isinstance(t, FieldElem) else t
        a, b, q = t.parts
        self.t = FieldElem._raw(a % q, b, q, t.disc)

    @property
    def disc(self) -> int:
        return self.t.disc

    def reduce(self) -> "Phase":
        return Phase(self.t)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.t + other.t)

    def shift(self, t) -> "Phase":
        """Multiply by ``exp(2*pi*i*t)``."""
        return Phase(self.t + t)

    def conjugate(self) -> "Phase":
        return Phase(-self.t)

    def __eq__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return self.t == other.t

    def __hash__(self):
        return hash(("Phase", self.t))

    def __repr__(self):
        return f"Phase({self.t})"

    def value(self, precision_bits: int = 53) -> complex:
        return phase_value(self, precision_bits)

    def __complex__(self):
        return phase_value(self)


_EXACT_PHASES = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


def phase_value(p: Phase, precision_bits: int = 53) -> complex:
    """Evaluate ``exp(2*pi*i*t)``."""
    t = p.t
    if t.is_rational() and t.rat in _EXACT_PHASES:
        return _EXACT_PHASES[t.rat]
    a, b, q = t.parts
    with mpmath.workprec(max(precision_bits, 53) + 20):
        val = (mpmath.mpf(a) + mpmath.mpf(b) * mpmath.sqrt(t.disc)) / q
        z = mpmath.expjpi(2 * val)
        return complex(float(z.real), float(z.imag))


def polar_value(coeff: FieldElem, phase: Phase) -> complex:
    return float(coeff) * phase_value(phase)
