"""Classical polynomials over Q(t), composition f(P(x)), homogeneous
components by rational scaling, and generalized-monomial degree tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from fecheck.atoms import Verdict
from fecheck.exactfield import ZERO, FieldElem
from fecheck.multiadd import UnaryFn, delta, sample_tuples


class SingularSystemError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ClassicalPoly:
    """P(x) = sum_l coeffs[l] * x^l with coefficients in Q(t)."""

    coeffs: tuple[FieldElem, ...] = ()

    def __post_init__(self):
        cs = [FieldElem.coerce(c) for c in self.coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, k: int, c=1) -> ClassicalPoly:
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def __call__(self, x: FieldElem) -> FieldElem:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> ClassicalPoly:
        return ClassicalPoly(tuple(c * l for l, c in enumerate(self.coeffs) if l > 0))

    def __add__(self, other: ClassicalPoly) -> ClassicalPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return ClassicalPoly(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other) -> ClassicalPoly:
        if not isinstance(other, ClassicalPoly):
            return ClassicalPoly(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return ClassicalPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ClassicalPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ClassicalPoly:
        out = ClassicalPoly((1,))
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        return "poly[" + ", ".join(str(c) for c in self.coeffs) + "]"


def poly_eval(P: ClassicalPoly, x: FieldElem) -> FieldElem:
    return P(x)


def poly_derivative(P: ClassicalPoly) -> ClassicalPoly:
    return P.derivative()


@dataclass(frozen=True)
class AtPoly(UnaryFn):
    """x -> f(P(x))."""

    fn: Callable
    poly: ClassicalPoly

    def __call__(self, x):
        return self.fn(self.poly(x))

    def __str__(self):
        return f"at({self.fn}, {self.poly})"


def compose_fn(f: Callable, P: ClassicalPoly) -> AtPoly:
    return AtPoly(f, P)


def _invert_vandermonde(nodes: Sequence[Fraction]) -> list[list[Fraction]]:
    """Inverse of V[i][l] = nodes[i]**l by Gauss-Jordan over Q."""
    n = len(nodes)
    if len(set(nodes)) != n:
        raise SingularSystemError("Vandermonde nodes must be pairwise distinct")
    rows = [[q**l for l in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i, q in enumerate(nodes)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [row[n:] for row in rows]


@dataclass(frozen=True)
class HomogeneousComponent:
    """x -> c_l(x), the part of g scaling like q^l under x -> q*x."""

    g: Callable
    degree: int
    nodes: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]

    def __call__(self, x: FieldElem) -> FieldElem:
        acc = ZERO
        for q, w in zip(self.nodes, self.weights):
            if w:
                acc = acc + self.g(x * q) * w
        return acc


def homogeneous_components(g: Callable, N: int, nodes: Sequence | None = None) -> list[HomogeneousComponent]:
    """Split g into components of degree 0..N, assuming q -> g(q*x) is a
    polynomial of degree <= N.  Default nodes are 1, 2, ..., N+1."""
    nodes = tuple(Fraction(q) for q in (nodes if nodes is not None else range(1, N + 2)))
    if len(nodes) != N + 1:
        raise ValueError(f"need {N + 1} nodes, got {len(nodes)}")
    if any(q == 0 for q in nodes):
        raise ValueError("nodes must be nonzero")
    inv = _invert_vandermonde(nodes)
    return [HomogeneousComponent(g, l, nodes, tuple(inv[l])) for l in range(N + 1)]


def _increments(samples, k, count):
    # shift the windows so increments differ from the base point
    rotated = list(samples[1:]) + list(samples[:1])
    return sample_tuples(rotated, k, count)


def is_generalized_monomial_of_degree(f: Callable, n: int, samples: Sequence[FieldElem],
                                      count: int | None = None) -> Verdict:
    """Delta^(n+1) f vanishes and Delta_y^n f(x) = n! f(y) at the samples."""
    if not samples:
        raise ValueError("need at least one sample")
    count = len(samples) if count is None else count
    bases = [samples[i % len(samples)] for i in range(count)]
    for x, ys in zip(bases, _increments(samples, n + 1, count)):
        v = delta(f, ys)(x)
        if v:
            return Verdict(False, f"order-{n + 1} difference does not vanish",
                           {"x": str(x), "ys": [str(y) for y in ys], "value": str(v)})
    fact = math.factorial(n)
    for x, y in zip(bases, _increments(samples, 1, count)):
        y = y[0]
        lhs = delta(f, [y] * n)(x)
        rhs = f(y) * fact
        if lhs != rhs:
            return Verdict(False, f"Delta_y^{n} f(x) != {n}! f(y)",
                           {"x": str(x), "y": str(y), "lhs": str(lhs), "rhs": str(rhs)})
    return Verdict(True, f"generalized monomial of degree {n} on {count} samples")


def monomial_degree(f: Callable, nmax: int, samples: Sequence[FieldElem],
                    count: int | None = None) -> int | None:
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    for n in range(nmax + 1):
        if is_generalized_monomial_of_degree(f, n, samples, count):
            return n
    return None
