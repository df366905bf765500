import pytest

from fecheck.atoms import Derivation, Identity, LinComb, Substitution
from fecheck.exactfield import ONE, ZERO, T, default_samples, elem
from fecheck.feq import (
    Scenario,
    build_E_kernel,
    build_Phi_kernel,
    builtin_scenarios,
    builtin_suite,
    compositions,
    example1_scenario,
    example2_scenario,
    example3_scenario,
    kernel_scenario,
    multinomial,
    product_square_converse,
    product_square_scenario,
    prop_scenarios,
    run_scenarios,
    thm7_converse,
    verify_identity,
)
from fecheck.genpoly import ClassicalPoly
from fecheck.multiadd import (
    AtomFn,
    AtomProduct,
    Const,
    PowerBlocks,
    Trace,
    check_multiadditive,
    check_symmetric,
    sample_tuples,
)

d = Derivation(ONE)
phi = Substitution(T**2)
shift = Substitution(T + 1)
samples = tuple(default_samples(7, 10))


def test_syntactic_identity_passes():
    f = AtomFn(d)
    assert verify_identity(Scenario("same", f, f, samples)).actual


def test_failure_keeps_first_witness():
    r = verify_identity(Scenario("neq", AtomFn(d), Const(ONE), (T, T**2), expected=False))
    assert r.matched and not r.actual
    assert r.witnesses == [{"input": "t^2", "lhs": "2*t", "rhs": "1"}]


def test_evaluation_errors_reported():
    r = verify_identity(Scenario("pole", Const(ONE), lambda x: ONE / (x - 1), (ONE,)))
    assert not r.actual and r.errors[0]["input"] == "1"
    assert "errors" in r.to_dict()


def test_scenario_needs_samples():
    with pytest.raises(ValueError):
        Scenario("empty", Const(ONE), Const(ONE), ())


def test_compositions_and_multinomials():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(3, 4))) == 20
    assert multinomial(3, (1, 1, 1, 0)) == 6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_example1(n):
    assert verify_identity(example1_scenario([phi], [[1]], n, samples)).actual
    s = example1_scenario([Identity(), shift], [[1, 1], [0, 1]], n, samples)
    assert verify_identity(s).actual


@pytest.mark.parametrize("n", [1, 2, 3])
def test_example2(n):
    assert verify_identity(example2_scenario([d], [[1]], n, samples)).actual
    s = example2_scenario([d, Derivation(T)], [[0, 1], [1, 0]], n, samples)
    assert verify_identity(s).actual


def test_example2_single_value():
    s = example2_scenario([d], [[1]], 2, samples)
    assert s.lhs(T) == s.rhs(T) == elem("4*t^2")


def test_examples_require_independent_atoms():
    with pytest.raises(ValueError):
        example1_scenario([phi, phi], [[1, 0], [0, 1]], 2, samples)


@pytest.mark.parametrize("k, n", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2)])
def test_example3(k, n):
    assert verify_identity(example3_scenario(Derivation(T), k, n, samples)).actual


def test_example3_value():
    s = example3_scenario(d, 2, 1, samples)
    assert s.lhs(T) == s.rhs(T) == elem("2")


def test_proposition():
    i, ii = prop_scenarios(phi, ClassicalPoly((1, 2, 0, 1)), samples=samples)
    assert verify_identity(i).actual
    i, ii = prop_scenarios(d, ClassicalPoly.monomial(2), (False, True), samples)
    first = verify_identity(i)
    assert not first.actual and first.witnesses[0]["lhs"] != first.witnesses[0]["rhs"]
    assert verify_identity(ii).actual
    for k in (3, 4):
        assert verify_identity(prop_scenarios(d, ClassicalPoly.monomial(k), samples=samples)[1]).actual


def test_E_kernel_is_symmetric_and_additive():
    F, a, _ = thm7_converse(phi, elem("3/2"), 2, samples)
    E = build_E_kernel(F, a, 2)
    tuples = sample_tuples(samples, 4, 2)
    assert check_symmetric(E, tuples)
    assert check_multiadditive(E, tuples, samples)


def test_E_kernel_traces():
    F, a, s = thm7_converse(phi, elem("3/2"), 2, samples)
    assert verify_identity(s).actual
    assert verify_identity(kernel_scenario("E", build_E_kernel(F, a, 2), samples, True)).actual
    sq = AtomProduct((d, d))
    assert verify_identity(kernel_scenario("E1", build_E_kernel(sq, d, 1), samples, True)).actual
    neg = verify_identity(kernel_scenario("Ed", build_E_kernel(sq, d, 2), samples, False))
    assert not neg.actual and neg.witnesses


def test_phi_kernel_expands_to_pairings():
    # three pairings over 3 and six slot assignments over 6
    F = AtomProduct((Identity(), shift))
    a1, a2 = LinComb(((2, Identity()),)), d
    Phi = build_Phi_kernel(F, a1, a2)
    x = (T, T + 1, elem("1/t"), T**2)
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    expected = ZERO
    for (i, j), (k, l) in pairings:
        expected = expected + F(x[i] * x[j], x[k] * x[l]) / 3
    assignments = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2), (1, 2, 0, 3), (1, 3, 0, 2), (2, 3, 0, 1)]
    for i, j, k, l in assignments:
        expected = expected - a1(x[i]) * a1(x[j]) * a2(x[k]) * a2(x[l]) / 6
    assert Phi(*x) == expected


def test_phi_kernel_degenerate_case():
    F = AtomProduct((phi, phi))
    assert verify_identity(kernel_scenario("deg", build_Phi_kernel(F, phi, phi), samples, True)).actual


def test_product_square_converse_and_perturbation():
    F, a1, a2 = product_square_converse(Identity(), shift, 1, 1, 1)
    assert verify_identity(product_square_scenario(F, a1, a2, samples)).actual
    assert verify_identity(kernel_scenario("Phi", build_Phi_kernel(F, a1, a2), samples, True)).actual
    for bad in (d, LinComb(((ONE, shift), (ONE, d)))):
        r = verify_identity(product_square_scenario(F, a1, bad, samples, expected=False))
        assert not r.actual and r.witnesses


def test_product_square_needs_squared_normalization():
    F, a1, a2 = product_square_converse(Identity(), shift, 2, 3, 36)
    assert verify_identity(product_square_scenario(F, a1, a2, samples)).actual
    F, a1, a2 = product_square_converse(Identity(), shift, 2, 3, 6)
    assert not verify_identity(product_square_scenario(F, a1, a2, samples)).actual


def test_run_scenarios_guards():
    with pytest.raises(ValueError):
        run_scenarios([])
    s = Scenario("dup", Const(ONE), Const(ONE), samples)
    with pytest.raises(ValueError):
        run_scenarios([s, s])


def test_builtin_suite_all_matched():
    result = builtin_suite(7)
    assert result.ok
    assert len(result.reports) == len(builtin_scenarios(7))
    assert [r.scenario for r in result.reports] == sorted(r.scenario for r in result.reports)


def test_parallel_run_matches_serial():
    a = [r.to_dict() for r in builtin_suite(3, 4).reports]
    b = [r.to_dict() for r in builtin_suite(3, 4, workers=4).reports]
    assert a == b


def test_corrupt_flag_reports_mismatch():
    result = builtin_suite(7, corrupt=True)
    assert [r.scenario for r in result.mismatches] == [builtin_scenarios(7)[0].name]


def test_power_blocks_trace_of_E():
    F, a, _ = thm7_converse(phi, 2, 3, samples)
    G = PowerBlocks(F, (3, 3))
    for x in samples[:4]:
        assert Trace(G)(x) == Trace(F)(x**3)


def test_proposition_unit_value():
    # a(1) is 0 or 1 for every additive solution of (i)
    for a in (phi, shift, Identity(), d):
        i, _ = prop_scenarios(a, ClassicalPoly((1, 2, 0, 1)), samples=samples)
        if verify_identity(i).actual:
            assert a(ONE) in (ZERO, ONE)
    assert not verify_identity(prop_scenarios(LinComb(((2, phi),)),
                                              ClassicalPoly.monomial(2), samples=samples)[0]).actual
