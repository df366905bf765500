import pytest
from conftest import elems, nonzero_elems
from hypothesis import given

from fecheck.atoms import (
    Compose,
    Derivation,
    Identity,
    LinComb,
    Substitution,
    check_additive,
    check_homomorphism,
    check_leibniz,
    power,
    sample_pairs,
)
from fecheck.exactfield import ONE, ZERO, T, default_samples, elem

d = Derivation(ONE)
pairs = sample_pairs(default_samples(1, 10))


def test_derivation_values():
    assert d(T**3) == elem("3*t^2")
    assert Compose((d, d))(T**3) == elem("6*t")
    assert Derivation(T)(T**2) == elem("2*t^2")


def test_substitution_value():
    assert Substitution(T**2)(elem("(t+1)/t")) == elem("(t^2+1)/t^2")


def test_substitution_needs_nonconstant():
    with pytest.raises(ValueError):
        Substitution(elem("3"))


def test_compose_applies_first_part_first():
    assert Compose((d, Substitution(T**2)))(T) == ONE
    assert Compose((Substitution(T**2), d))(T) == elem("2*t")


def test_empty_compose_rejected():
    with pytest.raises(ValueError):
        Compose(())


def test_power():
    assert power(d, 0) == Identity()
    assert power(d, 3)(T**4) == elem("24*t")


def test_lincomb():
    m = LinComb(((2, Identity()), (T, d)))
    assert m(T**2) == elem("2*t^2+2*t^2")


@pytest.mark.parametrize("m", [Identity(), Derivation(T), Substitution(T + 1),
                               Compose((d, Substitution(T**3))),
                               LinComb(((elem("1/2"), d), (T, Identity())))])
def test_atoms_are_additive(m):
    assert check_additive(m, pairs)


def test_square_is_not_additive():
    v = check_additive(lambda x: x * x, pairs)
    assert not v
    assert v.witness["lhs"] != v.witness["rhs"]
    assert v.label == "FAIL"


def test_every_scaled_derivation_is_leibniz():
    assert check_leibniz(Derivation(elem("t^2+1")), pairs)


def test_substitution_breaks_leibniz():
    v = check_leibniz(Substitution(T**2), [(T, T)])
    assert not v
    assert v.witness == {"x": "t", "y": "t", "lhs": "t^4", "rhs": "2*t^3"}


def test_second_derivative_breaks_leibniz():
    v = check_leibniz(Compose((d, d)), [(T, T)])
    assert (v.witness["lhs"], v.witness["rhs"]) == ("2", "0")


@pytest.mark.parametrize("r", [T**2, T + 1, elem("1/t"), elem("(t^2+1)/(t-3)")])
def test_substitutions_are_homomorphisms(r):
    assert check_homomorphism(Substitution(r), pairs)


def test_identity_is_homomorphism_derivation_is_not():
    assert check_homomorphism(Identity(), pairs)
    assert not check_homomorphism(d, [(T, T)])


def test_checks_need_samples():
    with pytest.raises(ValueError):
        check_additive(d, [])


@given(elems(), elems(), nonzero_elems)
def test_linear_combinations_stay_additive(x, y, c):
    m = LinComb(((c, d), (ONE, Substitution(T**2))))
    assert m(x + y) == m(x) + m(y)
    assert m(ZERO) == ZERO


@given(elems())
def test_derivations_are_rational_homogeneous(x):
    # additivity plus Leibniz gives Q-homogeneity
    assert d(x * elem("7/3")) == d(x) * elem("7/3")
