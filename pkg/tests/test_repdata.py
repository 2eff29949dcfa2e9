from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tautdual import linalg
from tautdual.exactpoly import DimensionError
from tautdual.repdata import (
    Character,
    DataInconsistencyError,
    LieAlgebra,
    RepData,
    beta_prime,
    character_arith,
    check_bracket_compatibility,
    elementary_matrix,
    gl_algebra,
    quadric_cone_rep,
    repdata_from_json,
    repdata_to_json,
    segre_rep,
    sym_power_matrix,
    torus_rep,
    trace_ad,
    trace_drho,
    vector_field,
    veronese_rep,
)
from tautdual.weyl import parse_weyl

SL2 = {(0, 1): [0, 2, 0], (0, 2): [0, 0, -2], (1, 2): [1, 0, 0]}


def sl2_standard():
    lie = LieAlgebra(3, SL2, labels=["h", "E", "F"])
    return RepData(lie, [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]])


def test_vector_field_examples():
    rep = RepData(gl_algebra(2), [elementary_matrix(2, i, j) for i in range(2) for j in range(2)])
    # E12 sends e2 to e1, so Z(E12) = -x2 d1
    assert vector_field(rep, 1) == parse_weyl("-x2 d1", 2)
    std = sl2_standard()
    assert vector_field(std, 0) == parse_weyl("-x1 d1 + x2 d2", 2)
    with pytest.raises(IndexError):
        vector_field(std, 3)


@pytest.mark.parametrize("rep", [sl2_standard(), quadric_cone_rep(), segre_rep(), veronese_rep(2, 3),
                                 torus_rep([[1, 1, 1], [0, 1, 2]], 0)])
def test_vector_fields_respect_brackets(rep):
    assert check_bracket_compatibility(rep) == []


def test_traces():
    std = sl2_standard()
    assert trace_drho(std).values == (0, 0, 0)
    assert trace_ad(std.lie).values == (0, 0, 0)
    borel = LieAlgebra(2, {(0, 1): [0, 2]}, labels=["h", "E"])
    assert trace_ad(borel).values == (2, 0)
    q = quadric_cone_rep()
    assert trace_drho(q).values == (3, 0, 0, 0)
    assert beta_prime(q, Character.scaling(q.lie, Fraction(1, 2))).values == (Fraction(5, 2), 0, 0, 0)


def test_character_arithmetic():
    lie = quadric_cone_rep().lie
    a = Character.scaling(lie, 1)
    b = Character.scaling(lie, Fraction(1, 3))
    assert character_arith(a, b, "add").at_scaling() == Fraction(4, 3)
    assert character_arith(a, b, "sub").at_scaling() == Fraction(2, 3)
    assert character_arith(a, None, "negate").at_scaling() == -1
    with pytest.raises(ValueError):
        character_arith(a, b, "mul")
    with pytest.raises(DataInconsistencyError):
        Character(lie, (0, 1, 0, 0))  # h is a bracket
    with pytest.raises(DimensionError):
        Character(lie, (0, 0))


def test_invalid_lie_data():
    with pytest.raises(DataInconsistencyError, match="antisymmetric"):
        LieAlgebra(2, {(0, 1): [1, 0], (1, 0): [1, 0]})
    with pytest.raises(DataInconsistencyError, match="Jacobi"):
        LieAlgebra(3, {(0, 1): [0, 1, 0], (1, 2): [1, 0, 0]})
    with pytest.raises(DataInconsistencyError, match=r"\(0,2\)"):
        LieAlgebra(2, {(0, 2): [1, 0]})


def test_invalid_representation():
    lie = LieAlgebra(3, SL2, labels=["h", "E", "F"])
    with pytest.raises(DataInconsistencyError):
        RepData(lie, [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [2, 0]]])
    with pytest.raises(DimensionError):
        RepData(lie, [[[1, 0], [0, -1]], [[0, 1], [0, 0]]])
    scal = LieAlgebra(1, {}, scaling_element=0)
    with pytest.raises(DataInconsistencyError):
        RepData(scal, [[[2, 0], [0, 2]]])


def test_json_round_trip_and_errors():
    for rep in (quadric_cone_rep(), segre_rep()):
        back = repdata_from_json(repdata_to_json(rep))
        assert back.lie == rep.lie and back.matrices == rep.matrices
    obj = repdata_to_json(quadric_cone_rep())
    obj["lie"]["brackets"].append(list(obj["lie"]["brackets"][0]))
    with pytest.raises(DataInconsistencyError, match="twice"):
        repdata_from_json(obj)
    obj = repdata_to_json(quadric_cone_rep())
    obj["rep"]["N"] = 4
    with pytest.raises(DimensionError):
        repdata_from_json(obj)


def test_sym_power_is_a_homomorphism():
    # RepData construction verifies [rho(X), rho(Y)] = rho([X, Y]) on all of gl(3)
    rep = veronese_rep(3, 2)
    assert rep.N == 6
    assert rep.lie.is_perfect() is False


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4), st.lists(st.integers(-2, 2), min_size=4, max_size=4))
@settings(max_examples=30, deadline=None)
def test_sym_power_commutator(a, b):
    X = [a[:2], a[2:]]
    Y = [b[:2], b[2:]]
    XY = linalg.commutator(X, Y)
    lhs = linalg.commutator(sym_power_matrix(X, 2, 3), sym_power_matrix(Y, 2, 3))
    assert lhs == sym_power_matrix(XY, 2, 3)


def test_perfect_subalgebras():
    q = quadric_cone_rep().lie
    assert q.subalgebra_is_perfect([1, 2, 3])
    assert not q.subalgebra_is_perfect([0, 1])
    assert not q.is_perfect()
    assert torus_rep([[1, 1]], 0).lie.is_abelian()
