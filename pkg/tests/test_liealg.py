from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projcoh.exactalg import MultiPoly
from projcoh.liealg import (
    PolyVectorField,
    SlElement,
    basis,
    bracket,
    dual_basis,
    embed,
    grading_degree,
    killing,
    killing_via_ad,
    sl_dim,
    structure_constants,
    vf_bracket,
)

coef = st.integers(-3, 3).map(Fraction)


def elements(m):
    return st.lists(coef, min_size=sl_dim(m), max_size=sl_dim(m)).map(lambda c: SlElement.from_coords(m, c))


def vf(m, *comps):
    return PolyVectorField(tuple(comps))


def t_pow(k, c=1):
    return MultiPoly.monomial((k,), None, c)


h1 = SlElement.make(1, h=[1])
A1 = SlElement.make(1, A=[[1]])
a1 = SlElement.make(1, alpha=[1])


def test_dims():
    assert [sl_dim(m) for m in (1, 2, 3)] == [3, 8, 15]
    assert len(basis(2)) == 8


def test_bracket_examples():
    assert bracket(h1, a1) == SlElement.make(1, A=[[2]])
    h, hh = SlElement.make(2, h=[1, 2]), SlElement.make(2, h=[-1, 5])
    assert bracket(h, hh).is_zero()
    ident = SlElement.make(2, A=[[1, 0], [0, 1]])
    assert bracket(ident, SlElement.make(2, h=[1, 0])) == SlElement.make(2, h=[1, 0])


def test_bracket_rejects_mixed_m():
    with pytest.raises(ValueError):
        bracket(h1, SlElement.zero(2))


@pytest.mark.parametrize("m", [1, 2])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_lie_algebra_axioms(m, data):
    X, Y, Z = (data.draw(elements(m)) for _ in range(3))
    assert bracket(X, X).is_zero()
    assert bracket(X, Y) == bracket(Y, X).scale(-1)
    jac = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert jac.is_zero()


def test_embedding_examples():
    assert embed(h1) == vf(1, t_pow(0, -1))
    assert embed(A1) == vf(1, t_pow(1, -1))
    assert embed(a1) == vf(1, t_pow(2))


def test_vf_bracket_examples():
    d, td, t2d = vf(1, t_pow(0, -1)), vf(1, t_pow(1, -1)), vf(1, t_pow(2))
    assert vf_bracket(d, t2d) == vf(1, t_pow(1, -2))
    assert vf_bracket(t2d, t2d) == vf(1, MultiPoly.zero(1))
    # standard (X.Y^i - Y.X^i) d_i ordering: [-d, -t d] = +d
    assert vf_bracket(d, td) == vf(1, t_pow(0, 1))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_embedding_is_homomorphism(m):
    B = basis(m)
    for X in B:
        for Y in B:
            assert embed(bracket(X, Y)) == vf_bracket(embed(X), embed(Y))


@pytest.mark.parametrize("m", [1, 2])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_embedding_is_linear(m, data):
    X, Y = data.draw(elements(m)), data.draw(elements(m))
    lhs = embed(X + Y.scale(3))
    rhs = embed(X)
    ey = embed(Y)
    rhs = PolyVectorField(tuple(rhs[i] + ey[i] * MultiPoly.const(m, 3) for i in range(m)))
    assert lhs == rhs


def test_grading_degrees():
    assert grading_degree(SlElement.make(2, h=[1, 0])) == -1
    assert grading_degree(SlElement.make(2, A=[[0, 1], [0, 0]])) == 0
    assert grading_degree(SlElement.make(2, alpha=[0, 3])) == 1
    with pytest.raises(ValueError):
        grading_degree(h1 + a1)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_killing_matches_adjoint_trace(m):
    B = basis(m)
    for X in B:
        for Y in B:
            assert killing(X, Y) == killing_via_ad(X, Y)


def test_killing_examples():
    assert killing(A1, A1) == 2
    assert killing(h1, a1) == killing(a1, h1) != 0
    for X in basis(2)[:2]:
        for Y in basis(2)[:2]:
            assert killing(X, Y) == 0


@pytest.mark.parametrize("m", [1, 2])
def test_dual_basis(m):
    B = basis(m)
    D = dual_basis(B)
    for i, X in enumerate(B):
        for j, Y in enumerate(D):
            assert killing(X, Y) == (1 if i == j else 0)


def test_structure_constants_reproduce_bracket():
    c = structure_constants(2)
    B = basis(2)
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            expect = SlElement.zero(2)
            for k, v in c.get((i, j), {}).items():
                expect = expect + B[k].scale(v)
            assert bracket(B[i], B[j]) == expect
