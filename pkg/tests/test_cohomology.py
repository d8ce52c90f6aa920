import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projcoh.cohomology import (
    Cochain,
    FieldModule,
    FiniteModule,
    FiniteRep,
    OperatorModule,
    betti,
    betti_oracle,
    ce_coboundary,
    ce_contract,
    ce_lie,
    class_rank,
    glinv_dims,
    is_coboundary,
    sl_algebra,
    weight_zero_basis,
)
from projcoh.cohomology.algebra import gl_algebra
from projcoh.cohomology.modules import WeightError, wedge_sort
from projcoh.denstensor import SpaceCtx, WeylOperator, lie_op
from projcoh.liealg import basis, grading_element
from projcoh.namedmaps import gamma_n, tau_n

F = Fraction


def random_cochain(rng, module, s, N=2, n_tuples=3, n_keys=3):
    alg = sl_algebra(module.m)
    keys = module.keys_upto(N)
    tuples = list(combinations(range(alg.dim), s))
    vals = {}
    for I in rng.sample(tuples, min(n_tuples, len(tuples))):
        vals[I] = {k: rng.randint(-3, 3) for k in rng.sample(keys, min(n_keys, len(keys)))}
    return Cochain(s, alg, module, vals)


def op_cochain(module, fn):
    alg = sl_algebra(module.m)
    return Cochain(1, alg, module, {(i,): fn(B).terms for i, B in enumerate(basis(module.m))})


# --- cochain algebra -------------------------------------------------------


def test_wedge_sort():
    assert wedge_sort((2, 0, 1)) == (1, (0, 1, 2))
    assert wedge_sort((1, 0)) == (-1, (0, 1))
    assert wedge_sort((1, 1))[0] == 0


def test_cochain_rejects_unsorted_tuples():
    mod = FieldModule(1, 0, 0)
    with pytest.raises(ValueError):
        Cochain(2, sl_algebra(1), mod, {(1, 0): {((0,), ()): 1}})


def test_zero_cochain_coboundary_is_action():
    mod = FieldModule(1, F(1, 2), 1)
    key = mod.keys_upto(2)[-1]
    c = Cochain(0, sl_algebra(1), mod, {(): {key: 1}})
    dc = ce_coboundary(c)
    for i in range(3):
        assert dc.evaluate((i,)) == mod.act(i, key)


def test_contract_rejects_degree_zero():
    mod = FieldModule(1, 0, 0)
    with pytest.raises(ValueError):
        ce_contract(0, Cochain(0, sl_algebra(1), mod, {}))


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("s", [0, 1, 2])
@settings(max_examples=6, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_dd_zero_and_cartan(m, s, seed):
    rng = random.Random(seed)
    mod = FieldModule(m, F(1, 3), 1)
    c = random_cochain(rng, mod, s)
    dc = ce_coboundary(c)
    assert ce_coboundary(dc).is_zero()
    if s == 0:
        return
    for X in range(sl_algebra(m).dim):
        assert ce_lie(X, c) == ce_contract(X, dc) + ce_coboundary(ce_contract(X, c))


@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_operator_module_dd_zero(seed):
    rng = random.Random(seed)
    mod = OperatorModule.symbols(1, F(1, 2), 1, 0, 2)
    c = random_cochain(rng, mod, 1)
    assert ce_coboundary(ce_coboundary(c)).is_zero()


def test_grading_eigen_cocycle_is_exact():
    """A cocycle with L_E c = w c, w != 0, equals d(i_E c)/w."""
    mod = FieldModule(1, F(1, 2), 0)
    E = grading_element(1)
    rng = random.Random(1)
    for _ in range(5):
        c = ce_coboundary(random_cochain(rng, mod, 0, N=3))
        for w, piece in _eigen_split(c, E).items():
            if w and not piece.is_zero():
                assert ce_lie(E, piece) == piece.scale(w)
                assert piece == ce_coboundary(ce_contract(E, piece)).scale(1 / w)


def _eigen_split(c, E):
    alg = c.algebra
    parts = {}
    for (I, k), v in c.flat().items():
        w = c.module.weight(k) - sum((alg.eig[i] for i in I), F(0))
        parts.setdefault(w, {})[(I, k)] = v
    return {w: Cochain.from_flat(c.degree, alg, c.module, d) for w, d in parts.items()}


# --- modules -------------------------------------------------------------


def test_weight_zero_degree0_basis():
    mod = FieldModule(1, F(-1), 1)  # |a| = p - m delta = 2
    assert weight_zero_basis(0, mod) == [((), (2, 1))]
    assert weight_zero_basis(0, FieldModule(1, F(1, 2), 0)) == []


def test_operator_module_weights_match_grading():
    mod = OperatorModule.symbols(2, F(1, 3), 1, 0, 2)
    E = grading_element(2)
    for k in mod.keys_upto(1)[:20]:
        D = mod.to_element({k: F(1)})
        assert lie_op(E, D) == D.scale(mod.weight(k))


def test_symmetric_power_is_representation():
    for m in (1, 2):
        for k in (0, 1, 2):
            assert FiniteRep.symmetric_power(m, k, F(1, 3)).is_homomorphism()


def test_gl_algebra_dims():
    assert gl_algebra(2).dim == 4 and sl_algebra(2).dim == 8


def test_trivial_rep_of_abelian_gl1():
    rep = FiniteRep.trivial(1)
    assert betti(FiniteModule(rep), 1, algebra=rep.algebra).dims == [1, 1]


# --- Betti numbers ---------------------------------------------------------


def test_field_module_example():
    assert betti(FieldModule(1, 1, 1), 3).dims == [1, 1, 0, 0]


@pytest.mark.parametrize("k", [0, 1, 2])
def test_field_cohomology_table(k):
    for lam in (k - 1, k, k + 1, k + 2):
        dims = betti(FieldModule(1, lam, k), 3).dims
        expect = [int((lam, u) in {(k, 0), (k, 1), (k + 1, 1), (k + 1, 2)}) for u in range(4)]
        assert dims == expect, (k, lam, dims)


def test_density_operators_equal_weights():
    assert betti(OperatorModule.densities(1, F(1, 3), F(1, 3), 2), 3).dims == [1, 1, 0, 0]


def test_density_operators_01():
    assert betti(OperatorModule.densities(1, 0, 1, 3), 3).dims == [1, 2, 1, 0]


def test_order_zero_operators_match_oracle():
    mod = OperatorModule.symbols(1, F(1, 3), 1, 1, 0)
    assert betti(mod, 3).dims == betti_oracle(mod, 3, 4).dims


@pytest.mark.parametrize("lam,mu", [(0, 1), (F(1, 2), F(1, 2)), (F(-1, 2), F(3, 2))])
def test_oracle_agrees_on_densities(lam, mu):
    mod = OperatorModule.densities(1, lam, mu, 2)
    rep = betti_oracle(mod, 3, 4)
    assert rep.dd_zero
    assert rep.dims == betti(mod, 3).dims


def test_representatives_are_cocycles():
    rep = betti(OperatorModule.densities(1, 0, 1, 2), 2, representatives=True)
    assert [len(r) for r in rep.representatives] == rep.dims


# --- classes of the named cocycles -----------------------------------------


def test_critical_classes_are_independent():
    mod = OperatorModule.symbols(1, 1, 1, 0, 2)
    src = SpaceCtx(1, F(1), 1)
    tau = op_cochain(mod, lambda X: tau_n(1, X, src))
    gam = op_cochain(mod, lambda X: gamma_n(1, X, src))
    assert class_rank([tau, gam]) == 2 == betti(mod, 1).dims[1]


def test_gamma_exact_off_critical():
    mod = OperatorModule.symbols(1, F(1, 2), 1, 0, 2)
    src = SpaceCtx(1, F(1, 2), 1)
    assert is_coboundary(op_cochain(mod, lambda X: gamma_n(1, X, src)))


def test_tau0_spans_diagonal():
    mod = OperatorModule.symbols(1, 0, 1, 1, 2)
    src = SpaceCtx(1, F(0), 1)
    assert class_rank([op_cochain(mod, lambda X: tau_n(0, X, src))]) == 1 == betti(mod, 1).dims[1]


def test_class_rank_rejects_non_cocycles():
    mod = OperatorModule.symbols(1, F(1, 2), 1, 0, 2)
    src = SpaceCtx(1, F(1, 2), 1)
    with pytest.raises(ValueError):
        class_rank([op_cochain(mod, lambda X: tau_n(1, X, src))])


def test_coboundary_of_operator_is_exact():
    mod = OperatorModule.symbols(1, F(1, 3), 1, 0, 2)
    D = WeylOperator(mod.src, mod.tgt, {((0,), (0,), (1,), (1,)): 1})
    assert is_coboundary(op_cochain(mod, lambda X: lie_op(X, D)))


def test_weight_error_on_bad_module():
    with pytest.raises((WeightError, ValueError)):
        OperatorModule(SpaceCtx(1, F(0), 0), SpaceCtx(2, F(0), 0), 1)


# --- m = 2 tensor fields: invariants of gl(2) shifted by the form degree j ---


def _shifted(j, length):
    g = list(glinv_dims(2))
    return [g[u - j] if 0 <= u - j < len(g) else 0 for u in range(length)]


@pytest.mark.parametrize("lam,k,j", [(0, 0, 0), (1, 0, 2), (1, 1, 1)])
def test_m2_tensor_fields_are_shifted_invariants(lam, k, j):
    assert betti(FieldModule(2, lam, k), 3).dims == _shifted(j, 4)


@pytest.mark.parametrize("lam,k", [(F(1, 2), 0), (2, 0), (0, 1), (2, 1), (F(1, 3), 1)])
def test_m2_tensor_fields_vanish(lam, k):
    assert betti(FieldModule(2, lam, k), 3).dims == [0, 0, 0, 0]


def test_m2_densities_through_degree_four():
    assert betti(FieldModule(2, 0, 0), 4).dims == list(glinv_dims(2)) == [1, 1, 0, 1, 1]
    assert betti(FieldModule(2, 1, 0), 4).dims == [0, 0, 1, 1, 0]
