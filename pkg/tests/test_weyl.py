from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tautdual.exactpoly import LEX, DimensionError, Poly
from tautdual.weyl import (
    BFunction,
    ConfigurationError,
    WeylElement,
    WeylIdeal,
    ZeroModuleError,
    antinormal_to_normal,
    is_root,
    minimal_polynomial_of_theta,
    normal_to_antinormal,
    parse_weyl,
    rational_roots,
    upoly_compose_affine,
    weyl_left_groebner,
    weyl_mul,
    weyl_normal_form,
)

N = 2
coeffs = st.integers(-3, 3).map(Fraction)
monos = st.tuples(*[st.integers(0, 2)] * (2 * N))
elements = st.dictionaries(monos, coeffs, max_size=4).map(lambda d: WeylElement(N, d))
test_polys = [Poly.parse(s, N) for s in ("1", "x1", "x1^2 x2", "x1^3 + x2^3", "x1^2 x2^2 - x1 x2^3")]


def W(text, n=1):
    return parse_weyl(text, n)


def test_commutation_examples():
    assert weyl_mul(W("d1"), W("x1")) == W("x1 d1 + 1")
    assert weyl_mul(W("x1"), W("d1")) == W("x1 d1")
    assert weyl_mul(W("d1^2"), W("x1")) == W("x1 d1^2 + 2 d1")
    assert str(W("d1 x1")) == "x1 d1 + 1"


@given(elements)
def test_print_parse_round_trip(a):
    assert parse_weyl(str(a), N) == a if a else True


@given(elements, elements, elements)
@settings(max_examples=40, deadline=None)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements, elements)
@settings(max_examples=40, deadline=None)
def test_product_acts_as_composition(a, b):
    # independent oracle: operators acting on polynomials
    for f in test_polys:
        assert (a * b).apply_to(f) == a.apply_to(b.apply_to(f))


@given(elements, elements)
@settings(max_examples=40, deadline=None)
def test_filtration_and_weight(a, b):
    p = a * b
    if a and b and p:
        assert p.bernstein_degree() <= a.bernstein_degree() + b.bernstein_degree()
    if len(a.weights()) == 1 and len(b.weights()) == 1 and p:
        assert p.weights() == {next(iter(a.weights())) + next(iter(b.weights()))}


@given(elements)
def test_ordering_conversions_are_inverse(a):
    assert WeylElement(N, antinormal_to_normal(normal_to_antinormal(a.terms, N), N)) == a


def test_antinormal_example():
    # x d = d x - 1
    assert normal_to_antinormal(W("x1 d1").terms, 1) == {((1,), (1,)): 1, ((0,), (0,)): -1}


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        W("x1", 1) * W("x1", 2)


def test_groebner_examples():
    assert weyl_left_groebner(WeylIdeal([W("d1")])) == [W("d1")]
    assert weyl_left_groebner(WeylIdeal([W("3")])) == [W("1")]
    with pytest.raises(ConfigurationError):
        WeylIdeal([W("d1")]).groebner_basis(LEX)


def test_one_variable_ideal_family():
    # d (x d - c) = x d^2 + (1 - c) d, so d lies in the ideal once c != 1
    J0 = WeylIdeal([W("x1 d1"), W("d1^2")])
    assert J0.same_ideal(WeylIdeal([W("d1")]))
    J1 = WeylIdeal([W("x1 d1 - 1"), W("d1^2")])
    assert not J1.is_unit()
    assert not J1.contains(W("d1"))
    for c in (2, 3, 5):
        assert WeylIdeal([W(f"x1 d1 - {c}"), W("d1^2")]).is_unit()


@given(elements)
@settings(max_examples=30, deadline=None)
def test_membership_soundness(p):
    J = WeylIdeal([parse_weyl("x1 d1 - x2 d2", 2), parse_weyl("x1 x2", 2)])
    for g in J.generators:
        assert weyl_normal_form(g, J).is_zero()
        assert weyl_normal_form(p * g, J).is_zero()
    assert weyl_normal_form(WeylElement(2), J).is_zero()


def test_bfunction_of_delta_module():
    # D/Dx: x d = d x - 1 acts as -1, so theta = 1 + x d acts as 0
    res = minimal_polynomial_of_theta(WeylIdeal([W("x1")]), W("x1 d1 + 1"))
    assert res.status == "found"
    assert res.bfunction == BFunction((Fraction(0), Fraction(1)))
    assert res.certificate_ok and res.independent_below


def test_bfunction_zero_module_and_cap():
    with pytest.raises(ZeroModuleError):
        minimal_polynomial_of_theta(WeylIdeal([W("1")]), W("x1 d1"))
    res = minimal_polynomial_of_theta(WeylIdeal([], 1), W("x1 d1 + 1"), cap=3)
    assert res.status == "cap-exhausted"
    assert len(res.residues) == 4


def test_bfunction_rejects_non_normalising_operator():
    with pytest.raises(ValueError):
        minimal_polynomial_of_theta(WeylIdeal([W("x1")]), W("d1"))


def test_is_root_examples():
    b = BFunction.from_roots([0, 1])
    assert is_root(b, 1)
    assert not is_root(b, Fraction(1, 2))
    assert is_root(BFunction.from_roots([0]), 0)
    assert str(b) == "s^2 - s"


@given(st.lists(st.fractions(-4, 4, max_denominator=3), min_size=1, max_size=4))
def test_rational_roots_recovers_roots(roots):
    b = BFunction.from_roots(roots)
    assert b.roots() == sorted(set(roots))


def test_affine_composition():
    # p(s) = s^2 - s; p(1 - s) = s^2 - s
    assert upoly_compose_affine([0, -1, 1], 1, -1) == [0, -1, 1]
    assert rational_roots([Fraction(-1, 4), 0, 1]) == [Fraction(-1, 2), Fraction(1, 2)]
