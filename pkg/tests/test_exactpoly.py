from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tautdual.exactpoly import (
    DEGREVLEX,
    LEX,
    DimensionError,
    Poly,
    PolyIdeal,
    ResourceError,
    buchberger,
    groebner,
    integer_kernel_basis,
    minimal_generators,
    monomial_exponents,
    normal_form,
    toric_ideal,
    weighted_order,
)

NV = 3

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(*[st.integers(0, 3)] * NV)
polys = st.dictionaries(monos, coeffs, max_size=5).map(lambda d: Poly(NV, d))


def evaluate(p: Poly, point):
    total = Fraction(0)
    for m, c in p.terms.items():
        v = c
        for x, e in zip(point, m):
            v *= x ** e
        total += v
    return total


@given(polys)
def test_print_parse_round_trip(p):
    assert Poly.parse(str(p), NV) == p


@given(polys, polys, polys)
@settings(max_examples=50)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == Poly.zero(NV)


@given(polys, polys, st.tuples(*[st.fractions(-3, 3, max_denominator=3)] * NV))
@settings(max_examples=50)
def test_product_matches_pointwise_evaluation(a, b, pt):
    assert evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt)


def test_parse_examples():
    p = Poly.parse("-3/2 x1^2 x3 + x2", 3)
    assert p.terms == {(2, 0, 1): Fraction(-3, 2), (0, 1, 0): Fraction(1)}
    assert str(Poly.parse("x1 x3 - x2^2", 3)) == "-x2^2 + x1 x3"


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Poly.parse("x1", 2) + Poly.parse("x1", 3)
    with pytest.raises(DimensionError):
        Poly.parse("x4", 3)


def test_lex_groebner_example():
    I = PolyIdeal([Poly.parse("x1^2", 2), Poly.parse("x1 x2 + x2^2", 2)])
    gb = groebner(I, LEX)
    assert Poly.parse("x2^3", 2) in gb
    assert I.contains(Poly.parse("x2^3", 2))


def test_normal_form_depends_on_leading_term():
    I = PolyIdeal([Poly.parse("x1 x3 - x2^2", 3)])
    # lex: the leading term is x1 x3, which rewrites to x2^2
    assert normal_form(Poly.parse("x1 x3", 3), I, LEX) == Poly.parse("x2^2", 3)
    # degrevlex: the leading term is x2^2, so x1 x3 is already reduced
    assert normal_form(Poly.parse("x2^2", 3), I, DEGREVLEX) == Poly.parse("x1 x3", 3)
    assert normal_form(Poly.zero(3), I) == Poly.zero(3)


def test_unit_and_zero_ideals():
    assert PolyIdeal([Poly.const(3, 2)]).is_unit()
    assert PolyIdeal([], 2).is_zero_ideal()
    assert PolyIdeal([], 2).reduce(Poly.parse("x1", 2)) == Poly.parse("x1", 2)


def test_groebner_basis_same_ideal_under_different_orders():
    I = PolyIdeal([Poly.parse("x1^2 - x2", 3), Poly.parse("x1 x2 - x3", 3)])
    for order in (LEX, DEGREVLEX, weighted_order((1, 2, 3))):
        J = PolyIdeal(groebner(I, order), 3)
        assert J.same_ideal(I)


@given(polys, polys)
@settings(max_examples=30, deadline=None)
def test_membership_of_combinations(p, q):
    I = PolyIdeal([Poly.parse("x1 x3 - x2^2", 3), Poly.parse("x1^2 - x2 x3", 3)])
    f = p * I.generators[0] + q * I.generators[1]
    assert I.contains(f)


def test_pair_budget_is_a_resource_outcome():
    gens = [Poly.parse(s, 3).terms for s in ("x1^2 - x2 x3", "x1 x2 - x3^2", "x1 x3 - x2^2")]
    with pytest.raises(ResourceError) as info:
        buchberger(gens, DEGREVLEX, max_pairs=0)
    assert info.value.partial
    with pytest.raises(ResourceError):
        toric_ideal([[1, 1, 1, 1], [0, 1, 2, 3]], max_pairs=1)


def test_toric_examples():
    assert toric_ideal([[1, 1, 1], [0, 1, 2]]).same_ideal(PolyIdeal([Poly.parse("x1 x3 - x2^2", 3)]))
    assert toric_ideal([[1, 1]]).same_ideal(PolyIdeal([Poly.parse("x1 - x2", 2)]))
    assert toric_ideal([[1, 0], [0, 1]]).is_zero_ideal()
    cubic = toric_ideal([[1, 1, 1, 1], [0, 1, 2, 3]])
    assert len(minimal_generators(cubic)) == 3
    with pytest.raises(ValueError):
        toric_ideal([[1, 0], [1, 0]])


def test_toric_ideal_needs_saturation():
    # the lattice basis binomials alone do not generate the toric ideal here
    I = toric_ideal([[1, 1, 1, 1], [0, 1, 3, 4]])
    assert I.contains(Poly.parse("x2^4 - x1^3 x4", 4))
    assert I.contains(Poly.parse("x2 x3 - x1 x4", 4))
    assert not I.contains(Poly.parse("x2 - x3", 4))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
@settings(max_examples=40)
def test_integer_kernel_basis(A):
    for u in integer_kernel_basis(A):
        assert all(sum(a * x for a, x in zip(row, u)) == 0 for row in A)


def test_monomial_exponents_order():
    assert list(monomial_exponents(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert len(list(monomial_exponents(3, 3))) == 10


CONE = PolyIdeal([Poly.parse("x1 x3 - x2^2", 3), Poly.parse("x1 + x2 x3", 3)])


@given(polys, polys)
@settings(max_examples=30, deadline=None)
def test_normal_form_is_idempotent_and_linear(p, q):
    r = normal_form(p, CONE)
    assert normal_form(r, CONE) == r
    assert normal_form(p + q, CONE) == normal_form(r + normal_form(q, CONE), CONE)
    for g in groebner(CONE):
        assert normal_form(g, CONE).is_zero()


@pytest.mark.parametrize("A", [[[1, 1, 1], [0, 1, 2]], [[1, 1, 1, 1], [0, 1, 3, 4]]])
def test_toric_membership_matches_brute_force(A):
    # x^u - x^v lies in the toric ideal exactly when A u = A v
    I = toric_ideal(A)
    N = len(A[0])
    expos = [e for d in range(1, 5) for e in monomial_exponents(N, d)]
    for u in expos:
        Au = [sum(a * x for a, x in zip(row, u)) for row in A]
        for v in expos:
            if v <= u:
                continue
            Av = [sum(a * x for a, x in zip(row, v)) for row in A]
            binomial = Poly.monomial(u) - Poly.monomial(v)
            assert I.contains(binomial) == (Au == Av)
