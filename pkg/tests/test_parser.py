import pytest
from hypothesis import given
from hypothesis import strategies as st

from fecheck.atoms import Compose, Derivation, Identity, LinComb, Substitution
from fecheck.exactfield import ONE, T, default_samples, elem
from fecheck.feq import builtin_scenarios
from fecheck.genpoly import AtPoly, ClassicalPoly
from fecheck.multiadd import AtomProduct, FormSum, PowerBlocks, PullbackProduct
from fecheck.parser import (
    ParseError,
    parse_elem,
    parse_expression,
    parse_fn,
    parse_form,
    parse_map,
)

samples = default_samples(0, 3)


def test_basic_heads():
    assert parse_map("der(1)") == Derivation(ONE)
    assert parse_map("id") == Identity()
    assert parse_map("sub(t^2)") == Substitution(T**2)
    F = parse_form("prod(der(1), der(1))")
    assert isinstance(F, AtomProduct) and F.arity == 2


def test_kind_inference():
    assert isinstance(parse_expression("pull(der(1), 3)"), PullbackProduct)
    assert isinstance(parse_expression("blocks(prod(id, id); 2, 1)"), PowerBlocks)
    assert parse_expression("(t^2-1)/(t+1)") == T - 1


def test_map_algebra():
    m = parse_map("2*der(1) - t*id")
    assert isinstance(m, LinComb)
    assert m(T**2) == elem("4*t - t^3")
    assert parse_map("der(1)^3")(T**4) == elem("24*t")
    assert isinstance(parse_map("comp(der(1), sub(t+1))"), Compose)


def test_fn_values():
    f = parse_fn("at(trace(prod(der(1), der(1))), x^2+x)")
    assert isinstance(f, AtPoly) and f.poly == ClassicalPoly((0, 1, 1))
    assert f(T) == elem("4*t^2+4*t+1")
    assert parse_fn("delta(trace(prod(der(1), der(1))); t, t^2)")(T + 3) == elem("4*t")
    assert parse_fn("apply(der(1))^2 * x")(T) == T


@pytest.mark.parametrize("src, column", [
    ("der(", 5),
    ("1/(t-1", 7),
    ("foo(1)", 1),
    ("t^x", 3),
    ("der(1) der(1)", 8),
])
def test_errors_carry_position(src, column):
    with pytest.raises(ParseError) as info:
        parse_expression(src)
    assert info.value.line == 1
    assert info.value.column == column


def test_error_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_expression("prod(der(1),\n  der()")
    assert info.value.line == 2


def test_wrong_kind_rejected():
    with pytest.raises(ParseError):
        parse_map("prod(der(1), der(1))")
    with pytest.raises(ParseError):
        parse_form("der(1)")
    with pytest.raises(ParseError):
        parse_elem("der(1)")


def test_suite_expressions_round_trip():
    for s in builtin_scenarios(7, 2):
        for f in (s.lhs, s.rhs):
            g = parse_fn(str(f))
            # printing is a fixed point after one parse
            assert str(parse_fn(str(g))) == str(g)
            assert all(g(x) == f(x) for x in s.samples[:3])


maps = st.recursive(
    st.sampled_from([Identity(), Derivation(ONE), Derivation(T + 1), Substitution(T**2),
                     Substitution(elem("1/t"))]),
    lambda inner: st.one_of(
        st.lists(inner, min_size=1, max_size=3).map(lambda ps: Compose(tuple(ps))),
        st.lists(st.tuples(st.sampled_from([ONE, elem("-2/3"), T]), inner),
                 min_size=1, max_size=3).map(lambda ts: LinComb(tuple(ts))),
    ),
    max_leaves=5,
)


@given(maps)
def test_map_printer_round_trip(m):
    parsed = parse_map(str(m))
    assert str(parsed) == str(m)
    assert all(parsed(x) == m(x) for x in samples)


@given(st.lists(maps, min_size=1, max_size=3))
def test_form_printer_round_trip(ms):
    F = FormSum(((elem("3/2"), AtomProduct(tuple(ms))),))
    G = parse_form(str(F))
    args = samples[:len(ms)]
    assert G(*args) == F(*args)
