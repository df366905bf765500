"""Exact arithmetic in Q and in the rational-function field Q(t).

Rationals are :class:`fractions.Fraction`.  Polynomials over Q are kept in
:class:`Poly`, an immutable wrapper around FLINT's ``fmpq_poly`` that exposes
its coefficients lowest degree first.  :class:`FieldElem` is a canonical
quotient ``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic, so equality
of field elements is equality of representations.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Union

import flint

Rat = Fraction

#: Degree of the zero polynomial.  Never an integer.
NEG_INF = -math.inf


class CompositionUndefined(ArithmeticError):
    """Substituting a constant that is a pole of the function."""


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Poly:
    """Immutable polynomial in ``t`` with rational coefficients."""

    __slots__ = ("_p", "_key")

    def __init__(self, coefficients: Iterable = ()):
        if isinstance(coefficients, flint.fmpq_poly):
            self._p = coefficients
        else:
            self._p = flint.fmpq_poly([_to_fmpq(c) for c in coefficients])
        self._key = None

    @classmethod
    def _wrap(cls, p: flint.fmpq_poly) -> Poly:
        obj = cls.__new__(cls)
        obj._p = p
        obj._key = None
        return obj

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients lowest degree first; empty for the zero polynomial."""
        return tuple(_to_fraction(c) for c in self._p.coeffs())

    @property
    def degree(self) -> Union[int, float]:
        d = self._p.degree()
        return NEG_INF if d < 0 else d

    def is_zero(self) -> bool:
        return self._p.degree() < 0

    def leading(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return _to_fraction(self._p[self._p.degree()])

    def __add__(self, other: Poly) -> Poly:
        return Poly._wrap(self._p + other._p)

    def __sub__(self, other: Poly) -> Poly:
        return Poly._wrap(self._p - other._p)

    def __mul__(self, other: Poly) -> Poly:
        return Poly._wrap(self._p * other._p)

    def __neg__(self) -> Poly:
        return Poly._wrap(-self._p)

    def scale(self, c) -> Poly:
        return Poly._wrap(self._p * _to_fmpq(c))

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        q, r = divmod(self._p, other._p)
        return Poly._wrap(q), Poly._wrap(r)

    def gcd(self, other: Poly) -> Poly:
        """Monic gcd (zero only if both operands are zero)."""
        return Poly._wrap(self._p.gcd(other._p))

    def derivative(self) -> Poly:
        return Poly._wrap(self._p.derivative())

    def __call__(self, value):
        return _to_fraction(self._p(_to_fmpq(value)))

    def _tuple(self) -> tuple:
        if self._key is None:
            self._key = tuple((int(c.p), int(c.q)) for c in self._p.coeffs())
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self._tuple() == other._tuple()

    def __hash__(self) -> int:
        return hash(self._tuple())

    def __repr__(self) -> str:
        return f"Poly({list(map(str, self.coefficients))})"

    def __str__(self) -> str:
        return format_poly(self)


def _format_coeff_term(c: Fraction, k: int) -> str:
    mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
    a = abs(c)
    if not mono:
        return str(a)
    if a == 1:
        return mono
    return f"{a}*{mono}"


def format_poly(p: Poly) -> str:
    """Print highest degree first, e.g. ``t^2-3/2*t+1``."""
    coeffs = p.coefficients
    if not coeffs:
        return "0"
    out = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        term = _format_coeff_term(c, k)
        if not out:
            out.append(("-" if c < 0 else "") + term)
        else:
            out.append(("-" if c < 0 else "+") + term)
    return "".join(out)


_ZERO_P = flint.fmpq_poly([])
_ONE_P = flint.fmpq_poly([1])


class FieldElem:
    """Canonical element ``num/den`` of Q(t).

    Construction always reduces: the pair is divided by its gcd and the
    denominator made monic.  Zero is ``0/1``.
    """

    __slots__ = ("_num", "_den", "_key")

    def __init__(self, num=0, den=1):
        n = _as_fmpq_poly(num)
        d = _as_fmpq_poly(den)
        if d.degree() < 0:
            raise ZeroDivisionError("zero denominator")
        self._num, self._den = _reduce(n, d)
        self._key = None

    @classmethod
    def _raw(cls, n: flint.fmpq_poly, d: flint.fmpq_poly) -> FieldElem:
        obj = cls.__new__(cls)
        obj._num = n
        obj._den = d
        obj._key = None
        return obj

    @classmethod
    def _make(cls, n: flint.fmpq_poly, d: flint.fmpq_poly) -> FieldElem:
        return cls._raw(*_reduce(n, d))

    @classmethod
    def t(cls) -> FieldElem:
        return cls._raw(flint.fmpq_poly([0, 1]), _ONE_P)

    @classmethod
    def coerce(cls, value) -> FieldElem:
        if isinstance(value, FieldElem):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw(flint.fmpq_poly([_to_fmpq(value)]), _ONE_P)
        if isinstance(value, Poly):
            return cls._raw(value._p, _ONE_P)
        raise TypeError(f"cannot coerce {type(value).__name__} to FieldElem")

    @property
    def num(self) -> Poly:
        return Poly._wrap(self._num)

    @property
    def den(self) -> Poly:
        return Poly._wrap(self._den)

    def is_zero(self) -> bool:
        return self._num.degree() < 0

    def is_constant(self) -> bool:
        return self._num.degree() <= 0 and self._den.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return _to_fraction(self._num[0]) if self._num.degree() == 0 else Fraction(0)

    # field operations -------------------------------------------------

    def __add__(self, other) -> FieldElem:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self._den == other._den:
            return FieldElem._make(self._num + other._num, self._den)
        return FieldElem._make(
            self._num * other._den + other._num * self._den, self._den * other._den
        )

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem._raw(-self._num, self._den)

    def __sub__(self, other) -> FieldElem:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> FieldElem:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> FieldElem:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        # cross-cancel first, keeps operands small
        g1 = self._num.gcd(other._den)
        g2 = other._num.gcd(self._den)
        n = (self._num / g1 if g1 != _ONE_P else self._num) * (
            other._num / g2 if g2 != _ONE_P else other._num
        )
        d = (self._den / g2 if g2 != _ONE_P else self._den) * (
            other._den / g1 if g1 != _ONE_P else other._den
        )
        return FieldElem._make(n, d)

    __rmul__ = __mul__

    def inv(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(t)")
        return FieldElem._make(self._den, self._num)

    def __truediv__(self, other) -> FieldElem:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> FieldElem:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k: int) -> FieldElem:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        if k == 0:
            return ONE
        # reduced pair stays reduced under powers
        return FieldElem._raw(self._num**k, self._den**k)

    def ddt(self) -> FieldElem:
        """Derivative with respect to ``t`` (quotient rule)."""
        n, d = self._num, self._den
        return FieldElem._make(n.derivative() * d - n * d.derivative(), d * d)

    def compose(self, r: FieldElem) -> FieldElem:
        """The rational function ``self(r(t))``."""
        r = FieldElem.coerce(r)
        if r.is_constant():
            c = _to_fmpq(r.constant_value())
            if self._den(c) == 0:
                raise CompositionUndefined(f"t = {r} is a pole of {self}")
            return FieldElem._raw(flint.fmpq_poly([self._num(c) / self._den(c)]), _ONE_P)
        return _horner(self._num, r) / _horner(self._den, r)

    # comparison and display --------------------------------------------

    def _tuple(self) -> tuple:
        if self._key is None:
            self._key = (
                tuple((int(c.p), int(c.q)) for c in self._num.coeffs()),
                tuple((int(c.p), int(c.q)) for c in self._den.coeffs()),
            )
        return self._key

    def __eq__(self, other) -> bool:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash(self._tuple())

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"FieldElem({str(self)!r})"

    def __str__(self) -> str:
        num = format_poly(self.num)
        if self._den == _ONE_P:
            return num
        den = format_poly(self.den)
        if _needs_parens(self.num):
            num = f"({num})"
        if _needs_parens(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def degree_bound(self) -> int:
        """max(deg num, deg den); a size measure for reporting."""
        return max(self._num.degree(), self._den.degree(), 0)


def _needs_parens(p: Poly) -> bool:
    return sum(1 for c in p.coefficients if c != 0) > 1


def _as_fmpq_poly(value) -> flint.fmpq_poly:
    if isinstance(value, Poly):
        return value._p
    if isinstance(value, flint.fmpq_poly):
        return value
    if isinstance(value, (int, Fraction)):
        return flint.fmpq_poly([_to_fmpq(value)])
    if isinstance(value, (list, tuple)):
        return flint.fmpq_poly([_to_fmpq(c) for c in value])
    raise TypeError(f"cannot build a polynomial from {type(value).__name__}")


def _reduce(n: flint.fmpq_poly, d: flint.fmpq_poly):
    if n.degree() < 0:
        return _ZERO_P, _ONE_P
    g = n.gcd(d)
    if g != _ONE_P:
        n = n / g
        d = d / g
    lead = d[d.degree()]
    if lead != 1:
        n = n / lead
        d = d / lead
    return n, d


def _coerce_or_none(value):
    if isinstance(value, FieldElem):
        return value
    if isinstance(value, (int, Fraction)):
        return FieldElem.coerce(value)
    return None


def _horner(p: flint.fmpq_poly, r: FieldElem) -> FieldElem:
    acc = ZERO
    for c in reversed(p.coeffs()):
        acc = acc * r + FieldElem._raw(flint.fmpq_poly([c]), _ONE_P)
    return acc


ZERO = FieldElem._raw(_ZERO_P, _ONE_P)
ONE = FieldElem._raw(_ONE_P, _ONE_P)
T = FieldElem.t()


def add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def neg(a: FieldElem) -> FieldElem:
    return -a


def inv(a: FieldElem) -> FieldElem:
    return a.inv()


def pow(a: FieldElem, k: int) -> FieldElem:  # noqa: A001 - mirrors the field API
    return a**k


def ddt(a: FieldElem) -> FieldElem:
    return a.ddt()


def compose(x: FieldElem, r: FieldElem) -> FieldElem:
    return x.compose(r)


def elem(value) -> FieldElem:
    """Build a field element from an int, Fraction, FieldElem or literal string."""
    if isinstance(value, str):
        from fecheck.parser import parse_elem

        return parse_elem(value)
    return FieldElem.coerce(value)


def random_elem(rng: random.Random, max_degree: int = 3, height: int = 9) -> FieldElem:
    """Pseudo-random nonzero element with num/den degree <= max_degree and
    integer coefficients bounded by ``height`` in absolute value."""
    while True:
        num = [rng.randint(-height, height) for _ in range(rng.randint(0, max_degree) + 1)]
        den = [rng.randint(-height, height) for _ in range(rng.randint(0, max_degree) + 1)]
        if not any(den) or not any(num):
            continue
        return FieldElem(num, den)


def random_elems(seed: int, count: int, **kwargs) -> list[FieldElem]:
    rng = random.Random(seed)
    return [random_elem(rng, **kwargs) for _ in range(count)]


#: Hand-picked nonzero sample points: polynomials, reciprocals, rationals.
STRUCTURED_SAMPLES: tuple[FieldElem, ...] = (
    T,
    T + 1,
    T**2,
    FieldElem(2),
    T.inv(),
    (T + 1) / (T - 1),
    FieldElem(Fraction(3, 2)),
    T**3 - T,
    -T,
    (T**2 + 1).inv(),
)


def default_samples(seed: int = 0, count: int = 10) -> list[FieldElem]:
    """Structured samples followed by ``count`` seeded pseudo-random ones."""
    return list(STRUCTURED_SAMPLES) + random_elems(seed, count)
