"""Symmetric multi-additive forms, their traces, and difference operators.

Forms are evaluated, never expanded: a :class:`SymForm` is an AST whose
value at an argument tuple is computed exactly on demand.  One-variable
functions (:class:`UnaryFn`) are likewise lazy ASTs; ``delta`` and
``delta_mult`` wrap them in difference nodes rather than simplifying.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from fecheck.atoms import AdditiveMap, Verdict
from fecheck.exactfield import ONE, ZERO, FieldElem


class ArityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# symmetric forms


class SymForm:
    arity: int

    def __call__(self, *args: FieldElem) -> FieldElem:
        if len(args) != self.arity:
            raise ArityError(f"form of arity {self.arity} got {len(args)} arguments")
        return self._eval(args)

    def _eval(self, args: tuple[FieldElem, ...]) -> FieldElem:
        raise NotImplementedError


def _product(values) -> FieldElem:
    acc = ONE
    for v in values:
        acc = acc * v
    return acc


@dataclass(frozen=True)
class PullbackProduct(SymForm):
    """(x_1, ..., x_k) -> a(x_1 * ... * x_k)."""

    a: AdditiveMap
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ArityError("arity must be positive")

    def _eval(self, args):
        return self.a(_product(args))

    def __str__(self):
        return f"pull({self.a}, {self.arity})"


def _multiset_arrangements(labels: Sequence[int]):
    """Distinct orderings of a multiset of labels."""
    counts = Counter(labels)
    keys = sorted(counts)
    n = len(labels)
    out: list[int] = []

    def rec():
        if len(out) == n:
            yield tuple(out)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                out.append(key)
                yield from rec()
                out.pop()
                counts[key] += 1

    yield from rec()


@dataclass(frozen=True)
class AtomProduct(SymForm):
    """Symmetrized product (1/k!) sum_sigma prod_i a_i(x_sigma(i)).

    Evaluated as the mean over distinct assignments of maps to slots; every
    such assignment occurs equally often among the k! permutations.
    """

    maps: tuple[AdditiveMap, ...]

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ArityError("AtomProduct needs at least one map")
        object.__setattr__(self, "maps", maps)

    @property
    def arity(self) -> int:
        return len(self.maps)

    def _eval(self, args):
        distinct: list[AdditiveMap] = []
        labels = []
        for m in self.maps:
            if m not in distinct:
                distinct.append(m)
            labels.append(distinct.index(m))
        table = [[m(x) for x in args] for m in distinct]
        total = ZERO
        count = 0
        for arrangement in _multiset_arrangements(labels):
            total = total + _product(table[lab][slot] for slot, lab in enumerate(arrangement))
            count += 1
        return total / count

    def __str__(self):
        return "prod(" + ", ".join(map(str, self.maps)) + ")"


def ordered_block_partitions(n_slots: int, sizes: Sequence[int]):
    """All ways to split range(n_slots) into labelled blocks of the given sizes."""

    def rec(remaining: tuple[int, ...], i: int):
        if i == len(sizes):
            yield ()
            return
        for block in itertools.combinations(remaining, sizes[i]):
            rest = tuple(s for s in remaining if s not in block)
            for tail in rec(rest, i + 1):
                yield (block,) + tail

    yield from rec(tuple(range(n_slots)), 0)


@dataclass(frozen=True)
class PowerBlocks(SymForm):
    """The form (x_1..x_N) -> (1/N!) sum_sigma F(block products), N = sum(alphas).

    Each labelled block partition of the N slots appears prod(alpha_i!) times
    among the N! permutations, so the value is the mean of F over partitions.
    """

    F: SymForm
    alphas: tuple[int, ...]

    def __post_init__(self):
        alphas = tuple(int(a) for a in self.alphas)
        if len(alphas) != self.F.arity:
            raise ArityError(f"need {self.F.arity} exponents, got {len(alphas)}")
        if any(a < 0 for a in alphas) or sum(alphas) < 1:
            raise ArityError("exponents must be nonnegative with positive sum")
        object.__setattr__(self, "alphas", alphas)

    @property
    def arity(self) -> int:
        return sum(self.alphas)

    def _eval(self, args):
        total = ZERO
        count = 0
        for blocks in ordered_block_partitions(len(args), self.alphas):
            total = total + self.F(*(_product(args[i] for i in b) for b in blocks))
            count += 1
        return total / count

    def __str__(self):
        return f"blocks({self.F}; " + ", ".join(map(str, self.alphas)) + ")"


@dataclass(frozen=True)
class FormSum(SymForm):
    """Linear combination of forms sharing one arity."""

    terms: tuple[tuple[FieldElem, SymForm], ...]
    arity: int = 0

    def __post_init__(self):
        terms = tuple((FieldElem.coerce(c), f) for c, f in self.terms)
        arities = {f.arity for _, f in terms}
        if len(arities) > 1:
            raise ArityError(f"summands have mixed arities {sorted(arities)}")
        arity = arities.pop() if arities else self.arity
        if arity < 1:
            raise ArityError("an empty sum needs an explicit arity")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "arity", arity)

    def _eval(self, args):
        acc = ZERO
        for c, f in self.terms:
            if c:
                acc = acc + c * f(*args)
        return acc

    def __str__(self):
        if not self.terms:
            return f"sum(0*pull(id, {self.arity}))"
        return "sum(" + " + ".join(f"({c})*{f}" for c, f in self.terms) + ")"


def eval_form(A: SymForm, args: Sequence[FieldElem]) -> FieldElem:
    return A(*args)


def naive_symmetrization(F: SymForm, alphas: Sequence[int], args: Sequence[FieldElem]) -> FieldElem:
    """(1/N!) sum over all N! permutations; the reference for PowerBlocks."""
    N = len(args)
    bounds = list(itertools.accumulate(alphas, initial=0))
    total = ZERO
    for sigma in itertools.permutations(range(N)):
        blocks = [
            _product(args[sigma[j]] for j in range(bounds[i], bounds[i + 1]))
            for i in range(len(alphas))
        ]
        total = total + F(*blocks)
    return total / math.factorial(N)


# ---------------------------------------------------------------------------
# one-variable functions


class UnaryFn:
    def __call__(self, x: FieldElem) -> FieldElem:
        raise NotImplementedError


@dataclass(frozen=True)
class Trace(UnaryFn):
    form: SymForm

    def __call__(self, x):
        return self.form(*([x] * self.form.arity))

    def __str__(self):
        return f"trace({self.form})"


@dataclass(frozen=True)
class AtomFn(UnaryFn):
    map: AdditiveMap

    def __call__(self, x):
        return self.map(x)

    def __str__(self):
        return f"apply({self.map})"


@dataclass(frozen=True)
class PolyOf(UnaryFn):
    """x -> P(inner(x)) for a classical polynomial P."""

    poly: Callable
    inner: UnaryFn

    def __call__(self, x):
        return self.poly(self.inner(x))

    def __str__(self):
        return f"polyof({self.poly}, {self.inner})"


@dataclass(frozen=True)
class Product(UnaryFn):
    factors: tuple[UnaryFn, ...]

    def __call__(self, x):
        return _product(f(x) for f in self.factors)

    def __str__(self):
        return "(" + " * ".join(map(str, self.factors)) + ")" if self.factors else "1"


@dataclass(frozen=True)
class Power(UnaryFn):
    base: UnaryFn
    k: int

    def __call__(self, x):
        return self.base(x) ** self.k

    def __str__(self):
        return f"({self.base})^{self.k}"


@dataclass(frozen=True)
class Scaled(UnaryFn):
    c: FieldElem
    fn: UnaryFn

    def __post_init__(self):
        object.__setattr__(self, "c", FieldElem.coerce(self.c))

    def __call__(self, x):
        return self.c * self.fn(x)

    def __str__(self):
        return f"(({self.c})*{self.fn})"


@dataclass(frozen=True)
class FnSum(UnaryFn):
    terms: tuple[UnaryFn, ...]

    def __call__(self, x):
        acc = ZERO
        for f in self.terms:
            acc = acc + f(x)
        return acc

    def __str__(self):
        return "(" + " + ".join(map(str, self.terms)) + ")" if self.terms else "0"


@dataclass(frozen=True)
class Quotient(UnaryFn):
    num: UnaryFn
    den: UnaryFn

    def __call__(self, x):
        d = self.den(x)
        if d.is_zero():
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {x}")
        return self.num(x) / d

    def __str__(self):
        return f"(({self.num})/({self.den}))"


@dataclass(frozen=True)
class Const(UnaryFn):
    value: FieldElem

    def __post_init__(self):
        object.__setattr__(self, "value", FieldElem.coerce(self.value))

    def __call__(self, x):
        return self.value

    def __str__(self):
        return f"const({self.value})"


@dataclass(frozen=True)
class ArgPower(UnaryFn):
    """x -> x^k."""

    k: int = 1

    def __call__(self, x):
        return x**self.k

    def __str__(self):
        return "x" if self.k == 1 else f"x^{self.k}"


@dataclass(frozen=True)
class Delta(UnaryFn):
    """Iterated additive difference: x -> sum_S (-1)^(m-|S|) f(x + sum_S y)."""

    fn: Callable
    ys: tuple[FieldElem, ...]

    def __call__(self, x):
        m = len(self.ys)
        acc = ZERO
        for r in range(m + 1):
            sign = -1 if (m - r) % 2 else 1
            for subset in itertools.combinations(self.ys, r):
                shift = x
                for y in subset:
                    shift = shift + y
                v = self.fn(shift)
                acc = acc + v if sign > 0 else acc - v
        return acc

    def __str__(self):
        return f"delta({self.fn}; " + ", ".join(map(str, self.ys)) + ")"


@dataclass(frozen=True)
class DeltaMult(UnaryFn):
    """Iterated multiplicative difference on the group of nonzero elements."""

    fn: Callable
    ys: tuple[FieldElem, ...]

    def __post_init__(self):
        if any(y.is_zero() for y in self.ys):
            raise ValueError("multiplicative increments must be nonzero")

    def __call__(self, x):
        if x.is_zero():
            raise ZeroDivisionError("multiplicative difference undefined at 0")
        m = len(self.ys)
        acc = ZERO
        for r in range(m + 1):
            sign = -1 if (m - r) % 2 else 1
            for subset in itertools.combinations(self.ys, r):
                v = self.fn(x * _product(subset))
                acc = acc + v if sign > 0 else acc - v
        return acc

    def __str__(self):
        return f"delta_mult({self.fn}; " + ", ".join(map(str, self.ys)) + ")"


def trace(A: SymForm) -> Trace:
    return Trace(A)


def delta(f: Callable, ys: Sequence[FieldElem]) -> Delta:
    return Delta(f, tuple(FieldElem.coerce(y) for y in ys))


def delta_mult(g: Callable, ys: Sequence[FieldElem]) -> DeltaMult:
    return DeltaMult(g, tuple(FieldElem.coerce(y) for y in ys))


# ---------------------------------------------------------------------------
# polarization, symmetrization, uniqueness


def sample_tuples(samples: Sequence[FieldElem], k: int, count: int | None = None):
    """Cyclic k-windows of the samples with stride 1, then stride 2.

    Deterministic and covers mixed tuples without the cost of a full product.
    """
    n = len(samples)
    if n == 0:
        raise ValueError("need at least one sample")
    count = n if count is None else count
    out = []
    stride = 1
    while len(out) < count:
        for i in range(n):
            out.append(tuple(samples[(i + j * stride) % n] for j in range(k)))
            if len(out) == count:
                break
        stride += 1
    return out


@dataclass(frozen=True)
class Polarized:
    """(y_1..y_n) -> delta(f, ys)(x0) / n!."""

    fn: Callable
    n: int
    base: FieldElem

    def __call__(self, *ys: FieldElem) -> FieldElem:
        if len(ys) != self.n:
            raise ArityError(f"polarized form takes {self.n} arguments")
        return delta(self.fn, ys)(self.base) / math.factorial(self.n)

    def at_base(self, base: FieldElem, ys: Sequence[FieldElem]) -> FieldElem:
        return delta(self.fn, ys)(base) / math.factorial(self.n)


def polarize(f: Callable, n: int, probes: Sequence[FieldElem], tuples=None):
    """Recover the n-additive form behind a claimed degree-n trace.

    Returns the evaluable form (based at the first probe) and a verdict that
    the recovered values do not depend on the base point.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not probes:
        raise ValueError("need at least one probe")
    probes = [FieldElem.coerce(p) for p in probes]
    P = Polarized(f, n, probes[0])
    tuples = sample_tuples(probes, n) if tuples is None else tuples
    for ys in tuples:
        ref = P(*ys)
        for x0 in probes[1:]:
            other = P.at_base(x0, ys)
            if other != ref:
                return P, Verdict(
                    False,
                    f"value depends on base point: not a degree-{n} trace",
                    {"ys": [str(y) for y in ys], "x0": str(probes[0]), "x1": str(x0),
                     "value0": str(ref), "value1": str(other)},
                )
    return P, Verdict(True, f"consistent across {len(probes)} base points, {len(tuples)} tuples")


def symmetrize_powers(F: SymForm, alphas: Sequence[int]) -> PowerBlocks:
    """Symmetric form whose trace is x -> F(x^a_1, ..., x^a_n)."""
    return PowerBlocks(F, tuple(alphas))


def check_mainfact(A: SymForm, samples: Sequence[FieldElem], count: int | None = None) -> Verdict:
    """If trace(A) vanishes on the samples, check that A itself vanishes."""
    tr = Trace(A)
    for x in samples:
        v = tr(x)
        if v:
            return Verdict(
                False,
                "trace does not vanish; precondition unmet, check skipped",
                {"x": str(x), "trace": str(v)},
                skipped=True,
            )
    tuples = sample_tuples(samples, A.arity, count)
    for args in tuples:
        v = A(*args)
        if v:
            return Verdict(False, "trace vanishes but form does not",
                           {"args": [str(a) for a in args], "value": str(v)})
    return Verdict(True, f"form vanished on {len(tuples)} tuples")


def check_symmetric(A: SymForm, tuples) -> Verdict:
    for args in tuples:
        ref = A(*args)
        for perm in itertools.permutations(args):
            v = A(*perm)
            if v != ref:
                return Verdict(False, "not symmetric",
                               {"args": [str(a) for a in perm], "value": str(v), "expected": str(ref)})
    return Verdict(True, f"permutation invariant on {len(tuples)} tuples")


def check_multiadditive(A: SymForm, tuples, shifts: Sequence[FieldElem]) -> Verdict:
    """Additivity in the first slot; symmetry carries it to the others."""
    for args, s in zip(tuples, itertools.cycle(shifts)):
        lhs = A(args[0] + s, *args[1:])
        rhs = A(*args) + A(s, *args[1:])
        if lhs != rhs:
            return Verdict(False, "not additive in slot 1",
                           {"args": [str(a) for a in args], "shift": str(s),
                            "lhs": str(lhs), "rhs": str(rhs)})
    return Verdict(True, f"slot-additive on {len(tuples)} tuples")

