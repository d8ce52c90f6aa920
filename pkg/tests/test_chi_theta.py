import random
from fractions import Fraction
from itertools import combinations

import pytest

from projcoh.cohomology import (
    FiniteRep,
    ce_coboundary,
    ce_contract,
    ce_lie,
    chi,
    gl_cochain,
    glinv_dims,
    theta_check,
    theta_expected,
    trace_cochain,
    unit_cochain,
)
from projcoh.cohomology.algebra import gl_algebra, gl_index
from projcoh.cohomology.chi import scalar_polynomial
from projcoh.cohomology.modules import ExteriorTensorRep
from projcoh.exactalg import MultiPoly
from projcoh.namedmaps import commutator_constant

F = Fraction


def test_glinv_dims():
    assert glinv_dims(1) == (1, 1)
    assert glinv_dims(2) == (1, 1, 0, 1, 1)


@pytest.mark.parametrize("m,u", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)])
def test_exterior_tensor_is_representation(m, u):
    assert ExteriorTensorRep(m, u, FiniteRep.symmetric_power(m, 1, F(1, 2))).is_homomorphism()


def test_chi_degree_zero_is_constant():
    for m in (1, 2):
        g = unit_cochain(m)
        c = chi(g, 0, g.module.rep.V)
        assert scalar_polynomial(c, ()) == MultiPoly.const(m, 1)


def test_chi_of_trace_on_gl_is_trace():
    m = 2
    g = trace_cochain(m)
    c = chi(g, 0, g.module.rep.V)
    for i in range(m):
        for j in range(m):
            val = scalar_polynomial(c, (m + gl_index(m, i, j),)).evaluate_x((0, 0))
            assert val == MultiPoly.const(m, 1 if i == j else 0)


def test_chi_u1_on_alpha_is_constant():
    # tr(D alpha*) = 2t is linear, so its differential is the constant 2 dt
    m = 1
    V = FiniteRep.trivial(m)
    R = ExteriorTensorRep(m, 1, V)
    g = gl_cochain(0, R, {(): {0: 1}})
    c = chi(g, 1, V)
    val = scalar_polynomial(c, (2,))
    assert val == MultiPoly.const(1, 1)
    assert scalar_polynomial(c, (0,)) == MultiPoly.zero(1)


@pytest.mark.parametrize("m", [1, 2])
def test_chi_is_chain_map_and_annihilated_by_translations(m):
    rng = random.Random(11)
    V = FiniteRep.symmetric_power(m, 1, F(1, 2))
    gl = gl_algebra(m)
    for u in range(m + 1):
        R = ExteriorTensorRep(m, u, V)
        for t in (0, 1, 2):
            if t + u > 3:
                continue
            vals = {I: {j: rng.randint(-2, 2) for j in range(R.dim)} for I in combinations(range(gl.dim), t)}
            g = gl_cochain(t, R, vals)
            c = chi(g, u, V)
            assert ce_coboundary(c).values == chi(ce_coboundary(g), u, V, c.module).values
            if t + u:
                for h in range(m):
                    assert ce_contract(h, c).is_zero()
                    assert ce_lie(h, c).is_zero()


def test_theta_expected_values():
    assert abs(theta_expected(1, 0, 1, 0, 1)) == 2
    assert theta_expected(1, 1, 1, F(2), 0) == 0
    for m, q, n, d in [(1, 0, 1, 0), (2, 1, 2, F(1, 3))]:
        assert theta_expected(m, q, n, d, 0) == commutator_constant(n, q, d, m)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("q,n", [(0, 1), (1, 1), (0, 2)])
@pytest.mark.parametrize("t", [0, 1])
def test_theta(m, q, n, t):
    for d in (F(0), F(1), F(2 * q + n + m, m + 1)):
        r = theta_check(m, q, n, d, t)
        assert r.scalar == r.expected


def test_theta_rejects_bad_input():
    with pytest.raises(ValueError):
        theta_check(1, 0, 0, 1, 0)
    with pytest.raises(ValueError):
        theta_check(1, 0, 1, 1, 2)
