"""Functional-equation scenarios and the built-in verification suite.

A :class:`Scenario` pairs two one-variable functions with sample points and
the verdict it is expected to produce.  Negative scenarios (expected FAIL)
are first-class so a checker that always passes is caught.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from fecheck.atoms import (
    AdditiveMap,
    Derivation,
    Identity,
    LinComb,
    Substitution,
    power,
)
from fecheck.exactfield import ONE, ZERO, FieldElem, T, default_samples
from fecheck.genpoly import AtPoly, ClassicalPoly
from fecheck.multiadd import (
    ArgPower,
    AtomFn,
    AtomProduct,
    Const,
    FnSum,
    FormSum,
    PolyOf,
    Power,
    PowerBlocks,
    Product,
    Scaled,
    SymForm,
    Trace,
)
from fecheck.structure import certify_independent


@dataclass(frozen=True)
class Scenario:
    name: str
    lhs: Callable
    rhs: Callable
    samples: tuple[FieldElem, ...]
    expected: bool = True

    def __post_init__(self):
        samples = tuple(FieldElem.coerce(s) for s in self.samples)
        if not samples:
            raise ValueError(f"scenario {self.name!r} has no samples")
        object.__setattr__(self, "samples", samples)


@dataclass
class Report:
    scenario: str
    expected: bool
    actual: bool
    witnesses: list[dict] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    samples: int = 0
    seed: int | None = None

    @property
    def matched(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "expected": "pass" if self.expected else "fail",
            "actual": "pass" if self.actual else "fail",
            "witnesses": self.witnesses,
            "seed": self.seed,
            "samples": self.samples,
        }
        if self.errors:
            out["errors"] = self.errors
        return out


def verify_identity(s: Scenario, seed: int | None = None) -> Report:
    """PASS iff lhs(x) == rhs(x) exactly at every sample; first witness kept."""
    report = Report(s.name, s.expected, True, samples=len(s.samples), seed=seed)
    for x in s.samples:
        try:
            left, right = s.lhs(x), s.rhs(x)
        except (ArithmeticError, ValueError) as exc:
            report.actual = False
            report.errors.append({"input": str(x), "error": str(exc)})
            continue
        if left != right:
            report.actual = False
            report.witnesses.append({"input": str(x), "lhs": str(left), "rhs": str(right)})
            break
    return report


# ---------------------------------------------------------------------------
# examples and the proposition


def _require_independent(maps, samples):
    if len(maps) > 1:
        verdict = certify_independent(maps, samples)
        if not verdict:
            raise ValueError(f"atoms are not linearly independent: {verdict.detail}")


def _lambda_sum(maps, lambdas) -> FormSum:
    terms = [(lambdas[i][j], AtomProduct((maps[i], maps[j])))
             for i in range(len(maps)) for j in range(len(maps))]
    return FormSum(tuple(terms), arity=2)


def example1_scenario(phis: Sequence[AdditiveMap], lambdas, n: int, samples=None,
                      name: str | None = None) -> Scenario:
    """f = sum lambda_ij phi_i phi_j; f(x^n) = sum lambda_ij phi_i(x)^n phi_j(x)^n."""
    samples = samples or default_samples()
    _require_independent(phis, samples)
    f = Trace(_lambda_sum(phis, lambdas))
    k = len(phis)
    rhs = FnSum(tuple(
        Scaled(lambdas[i][j], Product((Power(AtomFn(phis[i]), n), Power(AtomFn(phis[j]), n))))
        for i in range(k) for j in range(k)
    ))
    return Scenario(name or f"example1_k{k}_n{n}", AtPoly(f, ClassicalPoly.monomial(n)), rhs,
                    samples or default_samples())


def example2_scenario(ds: Sequence[AdditiveMap], lambdas, n: int, samples=None,
                      name: str | None = None) -> Scenario:
    """f = sum lambda_ij d_i d_j; f(x^n) = sum lambda_ij n^2 x^(2n-2) d_i(x) d_j(x)."""
    samples = samples or default_samples()
    _require_independent(ds, samples)
    f = Trace(_lambda_sum(ds, lambdas))
    k = len(ds)
    rhs = FnSum(tuple(
        Scaled(lambdas[i][j] * n * n,
               Product((ArgPower(2 * n - 2), AtomFn(ds[i]), AtomFn(ds[j]))))
        for i in range(k) for j in range(k)
    ))
    return Scenario(name or f"example2_k{k}_n{n}", AtPoly(f, ClassicalPoly.monomial(n)), rhs,
                    samples or default_samples())


def compositions(total: int, parts: int):
    """Ordered tuples of `parts` nonnegative integers summing to `total`."""
    for cuts in itertools.combinations_with_replacement(range(total + 1), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def multinomial(k: int, ls: Sequence[int]) -> int:
    out = math.factorial(k)
    for l in ls:
        out //= math.factorial(l)
    return out


def example3_scenario(d: AdditiveMap, k: int, n: int, samples=None,
                      name: str | None = None) -> Scenario:
    """d^k(x^(2n)) = sum over l_1+..+l_2n = k of multinomial(k; l) prod d^(l_i)(x)."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    lhs = AtPoly(AtomFn(power(d, k)), ClassicalPoly.monomial(2 * n))
    terms = []
    for ls in compositions(k, 2 * n):
        factors = tuple(AtomFn(power(d, l)) for l in ls)
        terms.append(Scaled(multinomial(k, ls), Product(factors)))
    return Scenario(name or f"example3_k{k}_n{n}", lhs, FnSum(tuple(terms)),
                    samples or default_samples())


def prop_scenarios(a: AdditiveMap, P: ClassicalPoly, expected=(True, True), samples=None,
                   name: str = "prop") -> tuple[Scenario, Scenario]:
    """(i) a(P(x)) = P(a(x)) and (ii) a(P(x)) = P'(x) a(x)."""
    if P.degree < 2:
        raise ValueError("P must have degree at least 2")
    samples = samples or default_samples()
    lhs = AtPoly(AtomFn(a), P)
    first = Scenario(f"{name}_i", lhs, PolyOf(P, AtomFn(a)), samples, expected[0])
    second = Scenario(f"{name}_ii", lhs, Product((PolyOf(P.derivative(), ArgPower(1)), AtomFn(a))),
                      samples, expected[1])
    return first, second


# ---------------------------------------------------------------------------
# kernels


def build_E_kernel(F: SymForm, a: AdditiveMap, n: int) -> FormSum:
    """E = symmetrized F(x_1..x_n, x_(n+1)..x_2n) - a(x_1)...a(x_2n).

    Its trace is f(x^n) - a(x)^(2n) where f is the trace of F.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if F.arity != 2:
        raise ValueError("F must be bi-additive")
    return FormSum(((ONE, PowerBlocks(F, (n, n))), (-ONE, AtomProduct((a,) * (2 * n)))))


def build_Phi_kernel(F: SymForm, a1: AdditiveMap, a2: AdditiveMap) -> FormSum:
    """The symmetric 4-additive form with trace F(x^2, x^2) - a1(x)^2 a2(x)^2.

    The three pairings of F average to the (2, 2) block symmetrization, and
    the six a1a1a2a2 slot assignments over 6 are the symmetrized atom product.
    """
    if F.arity != 2:
        raise ValueError("F must be bi-additive")
    return FormSum(((ONE, PowerBlocks(F, (2, 2))), (-ONE, AtomProduct((a1, a1, a2, a2)))))


def thm7_converse(phi: AdditiveMap, alpha, n: int, samples=None) -> tuple[SymForm, AdditiveMap, Scenario]:
    """a = alpha*phi and f = alpha^(2n) phi^2 satisfy f(x^n) = a(x)^(2n)."""
    alpha = FieldElem.coerce(alpha)
    F = FormSum(((alpha ** (2 * n), AtomProduct((phi, phi))),))
    a = LinComb(((alpha, phi),))
    s = Scenario(f"thm7_converse_n{n}", AtPoly(Trace(F), ClassicalPoly.monomial(n)),
                 Power(AtomFn(a), 2 * n), samples or default_samples())
    return F, a, s


def product_square_scenario(F: SymForm, a1: AdditiveMap, a2: AdditiveMap, samples=None,
                           name: str = "product_square", expected: bool = True) -> Scenario:
    """f(x^2) = a1(x)^2 a2(x)^2 with f the trace of F."""
    rhs = Product((Power(AtomFn(a1), 2), Power(AtomFn(a2), 2)))
    return Scenario(name, AtPoly(Trace(F), ClassicalPoly.monomial(2)), rhs,
                    samples or default_samples(), expected)


def product_square_converse(phi1: AdditiveMap, phi2: AdditiveMap, a1_at_one, a2_at_one, f_at_one):
    """F = f(1) * sym(phi1 phi2), a_i = a_i(1) phi_i."""
    F = FormSum(((FieldElem.coerce(f_at_one), AtomProduct((phi1, phi2))),))
    a1 = LinComb(((FieldElem.coerce(a1_at_one), phi1),))
    a2 = LinComb(((FieldElem.coerce(a2_at_one), phi2),))
    return F, a1, a2


def kernel_scenario(name: str, kernel: SymForm, samples, expected: bool) -> Scenario:
    return Scenario(name, Trace(kernel), Const(ZERO), samples, expected)


# ---------------------------------------------------------------------------
# the suite


def run_scenarios(scenarios: Sequence[Scenario], seed: int | None = None,
                  workers: int | None = None) -> list[Report]:
    if not scenarios:
        raise ValueError("empty scenario list")
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ValueError("scenario names must be unique")
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(lambda s: verify_identity(s, seed), scenarios))
    else:
        reports = [verify_identity(s, seed) for s in scenarios]
    return sorted(reports, key=lambda r: r.scenario)


def builtin_scenarios(seed: int = 7, n_random: int = 10, corrupt: bool = False) -> list[Scenario]:
    """Every built-in scenario: converse checks, examples, kernels, negatives.

    ``corrupt`` flips one fixture (a test hook for mismatch reporting).
    """
    samples = tuple(default_samples(seed, n_random))
    d, dt = Derivation(ONE), Derivation(T)
    phi, phi_shift = Substitution(T**2), Substitution(T + 1)
    ident = Identity()
    out: list[Scenario] = []

    # quadratic forms in homomorphisms
    out.append(example1_scenario([phi], [[1]], 2, samples, "example1_k1_n2"))
    for n in (1, 2, 3):
        out.append(example1_scenario([ident, phi_shift], [[1, 1], [0, 1]], n, samples,
                                     f"example1_k2_n{n}"))
    # quadratic forms in derivations
    out.append(example2_scenario([d], [[1]], 2, samples, "example2_k1_n2"))
    for n in (1, 2, 3):
        out.append(example2_scenario([d, dt], [[0, 1], [1, 0]], n, samples, f"example2_k2_n{n}"))
    # iterated derivations of even powers
    for k in (1, 2, 3):
        for n in (1, 2):
            out.append(example3_scenario(d if k != 3 else dt, k, n, samples))

    # a(P(x)) against P(a(x)) and P'(x)a(x)
    P = ClassicalPoly((1, 2, 0, 1))
    out.extend(prop_scenarios(phi, P, (True, False), samples, "prop_sub_t2"))
    out.extend(prop_scenarios(d, ClassicalPoly.monomial(2), (False, True), samples, "prop_der_x2"))
    out.extend(prop_scenarios(d, ClassicalPoly.monomial(3), (False, True), samples, "prop_der_x3"))

    # f(x^n) = a(x)^(2n)
    for n in (2, 3):
        F7, a7, s7 = thm7_converse(phi, Fraction(3, 2), n, samples)
        out.append(s7)
        out.append(kernel_scenario(f"thm7_E_trace_n{n}", build_E_kernel(F7, a7, n), samples, True))
    Fd = AtomProduct((d, d))
    out.append(kernel_scenario("thm7_E_trace_derivation", build_E_kernel(Fd, d, 2), samples, False))
    out.append(Scenario("thm7_derivation_negative", AtPoly(Trace(Fd), ClassicalPoly.monomial(2)),
                        Power(AtomFn(d), 4), samples, False))

    # f(x^2) = a1(x)^2 a2(x)^2
    for tag, c1, c2 in (("unit", 1, 1), ("scaled", 2, Fraction(1, 2))):
        c1, c2 = FieldElem.coerce(c1), FieldElem.coerce(c2)
        F, a1, a2 = product_square_converse(ident, phi_shift, c1, c2, c1 * c2)
        out.append(product_square_scenario(F, a1, a2, samples, f"final_converse_{tag}"))
        out.append(kernel_scenario(f"final_Phi_trace_{tag}", build_Phi_kernel(F, a1, a2),
                                   samples, True))
    # with a1(1) = 2, a2(1) = 3 the equation forces f(1) = 36, not 6
    F, a1, a2 = product_square_converse(ident, phi_shift, 2, 3, 36)
    out.append(product_square_scenario(F, a1, a2, samples, "final_converse_f1_squared"))
    F, a1, a2 = product_square_converse(ident, phi_shift, 2, 3, 6)
    out.append(product_square_scenario(F, a1, a2, samples, "final_converse_f1_product", False))
    F, a1, a2 = product_square_converse(ident, phi_shift, 1, 1, 1)
    bad = LinComb(((ONE, phi_shift), (ONE, d)))
    out.append(product_square_scenario(F, a1, bad, samples, "final_perturbed_a2", False))
    out.append(kernel_scenario("final_Phi_trace_perturbed", build_Phi_kernel(F, a1, bad),
                               samples, False))

    if corrupt:
        s = out[0]
        out[0] = Scenario(s.name, s.lhs, Scaled(2, s.rhs), s.samples, s.expected)
    return out


@dataclass
class SuiteResult:
    reports: list[Report]
    seed: int

    @property
    def mismatches(self) -> list[Report]:
        return [r for r in self.reports if not r.matched]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def builtin_suite(seed: int = 7, n_random: int = 10, corrupt: bool = False,
                workers: int | None = None) -> SuiteResult:
    scenarios = builtin_scenarios(seed, n_random, corrupt)
    return SuiteResult(run_scenarios(scenarios, seed, workers), seed)

