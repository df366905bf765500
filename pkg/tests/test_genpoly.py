from fractions import Fraction

import pytest
import sympy
from conftest import elems
from hypothesis import given
from hypothesis import strategies as st

from fecheck.atoms import Derivation, Identity, Substitution
from fecheck.exactfield import ONE, ZERO, T, default_samples, elem
from fecheck.genpoly import (
    AtPoly,
    ClassicalPoly,
    SingularSystemError,
    _invert_vandermonde,
    homogeneous_components,
    is_generalized_monomial_of_degree,
    monomial_degree,
)
from fecheck.multiadd import AtomFn, AtomProduct, Const, Trace

d = Derivation(ONE)
phi = Substitution(T**2)
samples = default_samples(4, 6)
P = ClassicalPoly((0, 1, 1))  # x^2 + x


def test_poly_evaluation():
    assert P(T) == elem("t^2+t")
    assert ClassicalPoly((1,))(elem("1/t")) == ONE
    assert ClassicalPoly((2, T, 1))(T) == elem("2*t^2+2")


def test_poly_derivative():
    assert ClassicalPoly.monomial(4).derivative() == ClassicalPoly.monomial(3, 4)
    assert ClassicalPoly((7,)).derivative() == ClassicalPoly()
    assert ClassicalPoly((0, 2, 0, 1)).derivative() == ClassicalPoly((2, 0, 3))


def test_at_poly():
    assert AtPoly(AtomFn(d), ClassicalPoly.monomial(2))(T) == elem("2*t")
    assert AtPoly(Trace(AtomProduct((d, d))), P)(T) == elem("(2*t+1)^2")
    f = Trace(AtomProduct((d, phi)))
    assert all(AtPoly(f, ClassicalPoly.monomial(1))(x) == f(x) for x in samples)


def test_vandermonde_inverse_matches_sympy():
    nodes = [Fraction(1), Fraction(-2), Fraction(1, 3), Fraction(5)]
    inv = _invert_vandermonde(nodes)
    oracle = sympy.Matrix([[sympy.Rational(q) ** l for l in range(4)] for q in nodes]).inv()
    for i in range(4):
        for j in range(4):
            assert sympy.Rational(inv[i][j]) == oracle[i, j]


def test_repeated_nodes_rejected():
    with pytest.raises(SingularSystemError):
        _invert_vandermonde([Fraction(1), Fraction(1)])
    with pytest.raises(ValueError):
        homogeneous_components(AtomFn(d), 1, nodes=[0, 1])


def test_components_of_quadratic_at_poly():
    g = AtPoly(Trace(AtomProduct((d, d))), P)
    comps = homogeneous_components(g, 4)
    values = [c(T) for c in comps]
    assert values == [ZERO, ZERO, ONE, elem("4*t"), elem("4*t^2")]


@pytest.mark.parametrize("nodes", [None, [1, -1, 2, -2, 3], [Fraction(1, 2), 3, -5, 7, Fraction(2, 3)]])
def test_five_term_split(nodes):
    F = AtomProduct((d, phi))
    a1, a0 = T, elem("2")
    Q = ClassicalPoly((a0, a1, 1))
    comps = homogeneous_components(AtPoly(Trace(F), Q), 4, nodes)
    for x in samples[:5]:
        sq, lin = x * x, a1 * x
        expected = [
            F(a0, a0),
            F(lin, a0) * 2,
            F(sq, a0) * 2 + F(lin, lin),
            F(sq, lin) * 2,
            F(sq, sq),
        ]
        assert [c(x) for c in comps] == expected


@given(elems(), st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool))
def test_components_are_homogeneous(x, q):
    g = AtPoly(Trace(AtomProduct((d, phi))), P)
    comps = homogeneous_components(g, 4)
    for c in comps:
        assert c(x * q) == c(x) * q**c.degree
    total = ZERO
    for c in comps:
        total = total + c(x)
    assert total == g(x)


def test_generalized_monomial_clauses():
    assert is_generalized_monomial_of_degree(AtomFn(d), 1, samples)
    lin = is_generalized_monomial_of_degree(AtomFn(d), 2, samples)
    assert not lin and "2! f(y)" in lin.detail
    f3 = AtPoly(Trace(AtomProduct((d, d))), ClassicalPoly.monomial(3))
    assert is_generalized_monomial_of_degree(f3, 6, samples)


def test_monomial_degree_values():
    assert monomial_degree(AtomFn(d), 4, samples) == 1
    assert monomial_degree(Trace(AtomProduct((d, d))), 4, samples) == 2
    assert monomial_degree(Const(elem("5")), 4, samples) == 0
    assert monomial_degree(AtPoly(AtomFn(Identity()), P), 4, samples) is None
