"""Finite-grid rank tests: decomposability evidence, linear independence of
atoms, and the order test for higher-order derivations.

All verdicts here are one-sided evidence gathered on finite grids.  A kernel
that is a finite sum of products has bounded rank on every grid; the converse
cannot be decided from finitely many values.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import flint

from fecheck.atoms import AdditiveMap, Verdict
from fecheck.exactfield import ONE, FieldElem, Poly, random_elem
from fecheck.multiadd import ArgPower, AtomFn, Quotient, delta_mult


def matrix_rank(rows: Sequence[Sequence[FieldElem]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination over Q(t)."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = ONE
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            a = m[r][col]
            for c in range(col + 1, ncols):
                m[r][c] = (p * m[r][c] - a * m[rank][c]) / prev
            m[r][col] = FieldElem.coerce(0)
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


@dataclass(frozen=True)
class KernelGrid:
    xs: tuple[FieldElem, ...]
    ys: tuple[FieldElem, ...]
    values: tuple[tuple[FieldElem, ...], ...]

    @classmethod
    def build(cls, K: Callable, xs, ys) -> KernelGrid:
        xs, ys = tuple(xs), tuple(ys)
        if not xs or not ys:
            raise ValueError("grids must be nonempty")
        return cls(xs, ys, tuple(tuple(K(x, y) for y in ys) for x in xs))

    def rank(self) -> int:
        return matrix_rank(self.values)


def kernel_rank(K: Callable, xs: Sequence[FieldElem], ys: Sequence[FieldElem]) -> int:
    return KernelGrid.build(K, xs, ys).rank()


def constant_rank(rows: Sequence[Sequence[FieldElem]]) -> int:
    """Rank over Q of the rows, reading each Q(t) entry through its
    coefficients: a column's entries are brought to a common denominator and
    every numerator coefficient becomes one Q-column."""
    if not rows:
        return 0
    qrows = [[] for _ in rows]
    for col in zip(*rows):
        common = Poly((1,))
        for v in col:
            g = common.gcd(v.den)
            common = common * v.den.divmod(g)[0]
        nums = [(v.num * common.divmod(v.den)[0]).coefficients for v in col]
        width = max((len(c) for c in nums), default=0)
        for r, c in zip(qrows, nums):
            r.extend(c + (Fraction(0),) * (width - len(c)))
    if not qrows[0]:
        return 0
    return flint.fmpq_mat([[flint.fmpq(x.numerator, x.denominator) for x in r] for r in qrows]).rank()


def certify_independent(maps: Sequence[AdditiveMap], xs: Sequence[FieldElem],
                        over: str = "constants") -> Verdict:
    """Full rank of the value matrix [m_i(x_j)] certifies independence.

    ``over="constants"`` (default) tests linear independence with rational
    coefficients; ``over="field"`` tests it with Q(t) coefficients, which is
    stronger: der(1) and der(t) = t*der(1) are independent only over Q.
    """
    if len(xs) < len(maps):
        raise ValueError("need at least as many grid points as maps")
    rows = [[m(x) for x in xs] for m in maps]
    r = constant_rank(rows) if over == "constants" else matrix_rank(rows)
    if r == len(maps):
        return Verdict(True, f"value matrix has full rank {r} over {over}")
    return Verdict(False, f"value matrix has rank {r} < {len(maps)} over {over}",
                   {"maps": [str(m) for m in maps], "grid": [str(x) for x in xs], "rank": r})


@dataclass(frozen=True)
class HodReport:
    degree: int | None
    d_at_one: FieldElem
    seed: int
    increments: tuple[FieldElem, ...] = field(default=())

    @property
    def precondition_ok(self) -> bool:
        return self.d_at_one.is_zero()


def increment_pool(seed: int, size: int) -> list[FieldElem]:
    """Nonzero small-height rational functions, reproducible from the seed."""
    rng = random.Random(seed)
    return [random_elem(rng, max_degree=2, height=5) for _ in range(size)]


def hod_degree(D: AdditiveMap, nmax: int, samples: Sequence[FieldElem], seed: int = 0,
               trials: int = 3) -> HodReport:
    """Least n <= nmax with D/id a generalized polynomial of degree <= n on the
    multiplicative group, detected by vanishing of (n+1)-fold multiplicative
    differences.  Requires D(1) = 0; otherwise the degree is None."""
    samples = [s for s in samples if not FieldElem.coerce(s).is_zero()]
    if not samples:
        raise ValueError("need nonzero samples")
    d1 = D(ONE)
    pool = increment_pool(seed, nmax + 1 + trials)
    if d1:
        return HodReport(None, d1, seed, tuple(pool))
    g = Quotient(AtomFn(D), ArgPower(1))
    for n in range(nmax + 1):
        if _mult_differences_vanish(g, n + 1, samples, pool, trials):
            return HodReport(n, d1, seed, tuple(pool))
    return HodReport(None, d1, seed, tuple(pool))


def _mult_differences_vanish(g, order, samples, pool, trials) -> bool:
    for t in range(trials):
        ys = pool[t:t + order]
        for x in samples:
            if delta_mult(g, ys)(x):
                return False
    return True


@dataclass(frozen=True)
class DecomposabilityReport:
    max_rank: int
    ranks: tuple[int, ...]
    tails: tuple[FieldElem, ...]

    def bounded_by(self, r: int) -> bool:
        return self.max_rank <= r


def pullback_decomposable(a: AdditiveMap, k: int, xs: Sequence[FieldElem], ys: Sequence[FieldElem],
                          tail_samples: Sequence[FieldElem] | None = None) -> DecomposabilityReport:
    """Ranks of the slices (x, y) -> a(x * y * m) for tails m = products of
    k - 2 further sample points."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if k == 2:
        tails = [ONE]
    else:
        pool = list(tail_samples if tail_samples is not None else xs)
        tails = []
        for combo in itertools.islice(itertools.combinations_with_replacement(pool, k - 2), 4):
            m = ONE
            for c in combo:
                m = m * c
            tails.append(m)
    ranks = tuple(kernel_rank(lambda x, y, m=m: a(x * y * m), xs, ys) for m in tails)
    return DecomposabilityReport(max(ranks), ranks, tuple(tails))
