"""Concrete additive maps Q(t) -> Q(t).

An :class:`AdditiveMap` is a small immutable AST.  Calling it evaluates the
map exactly::

    >>> d = Derivation(ONE)
    >>> d(T**3)
    FieldElem('3*t^2')

``Compose([m1, m2])`` applies ``m1`` first, then ``m2``.

The ``check_*`` functions return a :class:`Verdict`.  A PASS means the
identity held exactly at every supplied sample; it is evidence, not proof.
They accept any callable, so non-additive fixtures can be plain functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from fecheck.exactfield import ONE, FieldElem


@dataclass(frozen=True)
class Verdict:
    passed: bool
    detail: str = ""
    witness: dict[str, Any] | None = None
    skipped: bool = False

    def __bool__(self) -> bool:
        return self.passed

    @property
    def label(self) -> str:
        if self.skipped:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"


class AdditiveMap:
    """Base class for the atom AST."""

    def __call__(self, x: FieldElem) -> FieldElem:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(AdditiveMap):
    def __call__(self, x):
        return x

    def __str__(self):
        return "id"


@dataclass(frozen=True)
class Derivation(AdditiveMap):
    """x -> u * dx/dt: the derivation of Q(t) sending t to u."""

    u: FieldElem = ONE

    def __post_init__(self):
        object.__setattr__(self, "u", FieldElem.coerce(self.u))

    def __call__(self, x):
        if x.is_constant():
            return FieldElem.coerce(0)
        return self.u * x.ddt()

    def __str__(self):
        return f"der({self.u})"


@dataclass(frozen=True)
class Substitution(AdditiveMap):
    """The field endomorphism x(t) -> x(r(t))."""

    r: FieldElem

    def __post_init__(self):
        r = FieldElem.coerce(self.r)
        if r.is_constant():
            raise ValueError(f"substitution needs a nonconstant r, got {r}")
        object.__setattr__(self, "r", r)

    def __call__(self, x):
        return x.compose(self.r)

    def __str__(self):
        return f"sub({self.r})"


@dataclass(frozen=True)
class Compose(AdditiveMap):
    """Apply the parts in order: comp(a, b)(x) = b(a(x))."""

    parts: tuple[AdditiveMap, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("Compose needs at least one map")
        object.__setattr__(self, "parts", parts)

    def __call__(self, x):
        for m in self.parts:
            x = m(x)
        return x

    def __str__(self):
        return "comp(" + ", ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class LinComb(AdditiveMap):
    """x -> sum of coeff_i * m_i(x); coefficients may be any field element."""

    terms: tuple[tuple[FieldElem, AdditiveMap], ...] = field(default=())

    def __post_init__(self):
        terms = tuple((FieldElem.coerce(c), m) for c, m in self.terms)
        object.__setattr__(self, "terms", terms)

    def __call__(self, x):
        acc = FieldElem.coerce(0)
        for c, m in self.terms:
            if c:
                acc = acc + c * m(x)
        return acc

    def __str__(self):
        if not self.terms:
            return "lin(0*id)"
        return "lin(" + " + ".join(f"({c})*{m}" for c, m in self.terms) + ")"


def power(m: AdditiveMap, k: int) -> AdditiveMap:
    """m composed with itself k times; k = 0 gives the identity."""
    if k == 0:
        return Identity()
    return Compose((m,) * k)


def evaluate(m: AdditiveMap, x: FieldElem) -> FieldElem:
    return m(x)


Pair = tuple[FieldElem, FieldElem]


def _first_failure(samples: Sequence[Pair], lhs, rhs):
    if not samples:
        raise ValueError("need at least one sample pair")
    for x, y in samples:
        left, right = lhs(x, y), rhs(x, y)
        if left != right:
            return {"x": str(x), "y": str(y), "lhs": str(left), "rhs": str(right)}
    return None


def _verdict(name: str, samples, witness) -> Verdict:
    if witness is None:
        return Verdict(True, f"{name} held at {len(samples)} sample pairs")
    return Verdict(False, f"{name} failed", witness)


def check_additive(m: Callable, samples: Sequence[Pair]) -> Verdict:
    w = _first_failure(samples, lambda x, y: m(x + y), lambda x, y: m(x) + m(y))
    return _verdict("additivity", samples, w)


def check_leibniz(m: Callable, samples: Sequence[Pair]) -> Verdict:
    w = _first_failure(
        samples, lambda x, y: m(x * y), lambda x, y: x * m(y) + m(x) * y
    )
    return _verdict("Leibniz rule", samples, w)


def check_homomorphism(m: Callable, samples: Sequence[Pair]) -> Verdict:
    w = _first_failure(samples, lambda x, y: m(x * y), lambda x, y: m(x) * m(y))
    return _verdict("multiplicativity", samples, w)


def sample_pairs(samples: Sequence[FieldElem]) -> list[Pair]:
    """Pairs (s_i, s_{i+1}) cyclically, plus the diagonal pairs (s_i, s_i)."""
    n = len(samples)
    pairs = [(samples[i], samples[(i + 1) % n]) for i in range(n)]
    return pairs + [(s, s) for s in samples]
