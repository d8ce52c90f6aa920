import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projcoh.denstensor import SpaceCtx, SymbolField, WeylOperator, apply_op, compose, lie_op, lift_phi
from projcoh.exactalg import compositions
from projcoh.liealg import SlElement, basis
from projcoh.namedmaps import (
    Ek_apply,
    Ek_check,
    T_n,
    casimir,
    casimir_formula,
    cocycle_check,
    coboundary_cochain,
    commutator_constant,
    commutator_defect,
    critical_delta,
    critical_table,
    equivariant_homs,
    expected_coefficients,
    gamma_cochain,
    gamma_n,
    is_diagonal_constant,
    quantization_map,
    quantize_symbol,
    solve_splitting,
    split_decision,
    split_predicate,
    symbol_hom_table,
    tau_cochain,
    tau_n,
    u_k,
    v_n,
    verify_quantization,
)

F = Fraction
t2d = SlElement.make(1, alpha=[1])
ident1 = SlElement.make(1, A=[[1]])


# --- T_n, tau_n, gamma_n ---------------------------------------------------


def test_t1_example():
    src = SpaceCtx(1, F(0), 2)
    P = SymbolField.monomial(src, (2,), (2,))
    assert apply_op(T_n(1, src), P) == SymbolField.monomial(SpaceCtx(1, F(0), 1), (1,), (1,), 4)


def test_t0_is_identity():
    ctx = SpaceCtx(2, F(1, 3), 2)
    assert T_n(0, ctx) == WeylOperator.identity(ctx)


def test_t_n_too_large_warns():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert not T_n(3, SpaceCtx(1, F(0), 1))
    assert w


@pytest.mark.parametrize("m", [1, 2])
def test_t_compose(m):
    src = SpaceCtx(m, F(1, 2), 2)
    mid = SpaceCtx(m, F(1, 2), 1)
    assert compose(T_n(1, mid), T_n(1, src)) == T_n(2, src)


def test_gamma_example():
    src = SpaceCtx(1, F(0), 2)
    P = SymbolField.monomial(src, (2,), (2,))
    assert apply_op(gamma_n(1, t2d, src), P) == SymbolField.monomial(SpaceCtx(1, F(0), 1), (2,), (1,), 2)


def test_tau_examples():
    src = SpaceCtx(2, F(1), 2)
    for X in basis(2)[:2]:
        assert not tau_n(1, X, src)
    src1 = SpaceCtx(1, F(1), 1)
    assert tau_n(1, ident1, src1) == T_n(1, src1)


def test_gamma_vanishes_below_top_degree():
    src = SpaceCtx(2, F(1), 1)
    for X in basis(2)[:6]:
        assert not gamma_n(1, X, src)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("delta", [F(0), F(1, 2), F(1), F(2)])
def test_gamma_is_cocycle(m, n, delta):
    assert cocycle_check(gamma_cochain(n, SpaceCtx(m, delta, n)), m)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("delta", [F(0), F(1, 2), F(1), F(4, 3), F(2)])
def test_tau_is_cocycle_exactly_at_vanishing_v(m, n, delta):
    src = SpaceCtx(m, delta, n)
    expect = n == 0 or v_n(m, delta, n, n) == 0
    assert cocycle_check(tau_cochain(n, src), m) == expect


def test_coboundaries_are_cocycles():
    src, tgt = SpaceCtx(1, F(1, 3), 1), SpaceCtx(1, F(1, 3), 0)
    D = WeylOperator(src, tgt, {((2,), (0,), (1,), (1,)): 1, ((0,), (0,), (0,), (1,)): -3})
    assert cocycle_check(coboundary_cochain(D), 1)


# --- constants --------------------------------------------------------------


def test_commutator_examples():
    assert commutator_constant(1, 1, 2, 1) == 0
    assert commutator_constant(1, 1, 0, 1) == 4
    assert commutator_constant(0, 2, F(5, 3), 2) == 0


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("n,p", [(0, 1), (1, 0), (1, 1), (2, 1)])
@pytest.mark.parametrize("delta", [F(0), F(5, 3)])
def test_commutator_identity(m, n, p, delta):
    rep = commutator_defect(n, p, delta, m)
    assert rep.matches, rep


def test_u_v_examples():
    assert u_k(2, F(1, 3), 2) == 2
    assert v_n(1, F(3, 2), 2, 1) == 1
    assert v_n(1, F(2), 2, 1) == 0


@pytest.mark.parametrize("m,p,delta,c", [(1, 0, 1, 0), (1, 1, 0, 1)])
def test_casimir_examples(m, p, delta, c):
    _, scalar = casimir(SpaceCtx(m, F(delta), p))
    assert scalar == c == casimir_formula(m, p, delta)


@settings(max_examples=8, deadline=None)
@given(st.lists(st.integers(1, 4).map(F) | st.integers(-4, -1).map(F), min_size=8, max_size=8),
       st.sampled_from([F(0), F(1, 2), F(2)]))
def test_casimir_is_basis_independent(scales, delta):
    ctx = SpaceCtx(2, delta, 1)
    C0, c0 = casimir(ctx)
    C1, c1 = casimir(ctx, [b.scale(s) for b, s in zip(basis(2), scales)])
    assert C0 == C1 and c0 == c1 == casimir_formula(2, 1, delta)


# --- E_k and splitting ------------------------------------------------------


def test_ek_vanishes_on_translations():
    ctx = SpaceCtx(2, F(1, 2), 2)
    for X in basis(2)[:2]:
        for a in compositions(2, 2):
            for b in compositions(2, 2):
                assert not Ek_apply(X, SymbolField.monomial(ctx, a, b), F(1, 3))


def test_e1_example():
    ctx = SpaceCtx(1, F(1, 2), 1)
    P = SymbolField.monomial(ctx, (0,), (1,))
    lhs = Ek_apply(t2d, P, F(1, 2))
    assert lhs == lift_phi(apply_op(gamma_n(1, t2d, ctx), P), F(1, 2)).scale(-1)
    assert lhs


def test_ek_zero_when_u_vanishes():
    for m, k in [(1, 1), (1, 2), (2, 2)]:
        lam = F(1 - k, m + 1)
        assert u_k(m, lam, k) == 0
        assert Ek_check(m, lam, lam + F(1, 2), k, xdeg=2)


@pytest.mark.parametrize("m,k,lam,mu,expect", [
    (1, 2, F(-1, 2), F(1), True),
    (1, 1, F(1, 4), F(5, 4), False),
    (2, 1, F(1, 5), F(1, 5), True),
    (1, 1, F(0), F(1), True),
])
def test_split_examples(m, k, lam, mu, expect):
    rep = split_decision(m, lam, mu, k)
    assert rep.split == expect
    assert rep.consistent
    assert split_predicate(m, lam, mu, k)[0] == expect


@pytest.mark.parametrize("m,k,lam,mu", [(1, 2, F(0), F(1, 2)), (1, 2, F(-1, 2), F(1)), (2, 1, F(1, 3), F(2, 3))])
def test_general_ansatz_agrees(m, k, lam, mu):
    a = solve_splitting(m, lam, mu, k)
    b = solve_splitting(m, lam, mu, k, general=True)
    assert (a is None) == (b is None)


def test_split_rejects_k0():
    with pytest.raises(ValueError):
        split_decision(1, 0, 1, 0)


# --- quantization -----------------------------------------------------------


def test_quantization_low_orders():
    lv = quantization_map(1, F(0), F(1, 3), 1)
    assert lv[0].coefficients == [1]
    assert lv[1].coefficients == [1, 0]
    lv = quantization_map(2, F(0), F(1, 5), 1)
    assert lv[1].coefficients == [1, 0]
    lv = quantization_map(1, F(-1, 2), F(0), 2)
    assert lv[2].coefficients[1] == 0


@pytest.mark.parametrize("m,lam,delta", [(1, F(1, 3), F(1, 3)), (1, F(-2, 7), F(1, 5)), (2, F(1, 4), F(1, 3))])
def test_quantization_matches_closed_form(m, lam, delta):
    mu = lam + delta
    for lv in quantization_map(m, lam, mu, 2):
        assert lv.exists and lv.kernel_dim == 0
        assert lv.coefficients == expected_coefficients(m, lam, mu, lv.k)
        assert verify_quantization(m, lam, mu, lv.k, lv.coefficients, xdeg=2)


def test_quantize_symbol_leading_term_is_lift():
    ctx = SpaceCtx(1, F(1, 3), 2)
    P = SymbolField.monomial(ctx, (1,), (2,))
    Q = quantize_symbol(P, F(1, 2), [F(1), F(7), F(5)])
    assert Q.order() == 2
    assert Q - lift_phi(P, F(1, 2)) == lift_phi(apply_op(T_n(1, ctx), P), F(1, 2)).scale(7) + \
        lift_phi(apply_op(T_n(2, ctx), P), F(1, 2)).scale(5)


# --- equivariant maps ------------------------------------------------------


def test_homs_examples():
    ctx = SpaceCtx(1, F(1, 3), 2)
    homs = equivariant_homs(ctx, ctx, 2, 2)
    assert len(homs) == 1 and homs[0].scale(F(1, 2)) == WeylOperator.identity(ctx)
    homs = equivariant_homs(SpaceCtx(1, F(1), 1), SpaceCtx(1, F(1), 0), 2, 2)
    assert len(homs) == 1 and homs[0] == T_n(1, SpaceCtx(1, F(1), 1))
    for d in (F(0), F(1), F(2), F(-1, 2)):
        assert equivariant_homs(SpaceCtx(1, d, 0), SpaceCtx(1, d, 1), 2, 3) == []


@pytest.mark.parametrize("m,p,q", [(1, 2, 0), (1, 2, 1), (2, 1, 0), (2, 2, 1)])
def test_t_n_equivariant_at_critical_weight(m, p, q):
    d = critical_delta(m, p, q)
    src = SpaceCtx(m, d, p)
    homs = equivariant_homs(src, SpaceCtx(m, d, q), p - q, p - q)
    assert len(homs) == 1
    T = T_n(p - q, src)
    k0 = next(iter(T.terms))
    assert homs[0].scale(T.terms[k0] / homs[0].terms[k0]) == T
    for X in basis(m):
        assert not lie_op(X, T)


def test_symbol_hom_table():
    assert is_diagonal_constant(symbol_hom_table(1, F(1, 3), 2))
    assert not is_diagonal_constant(symbol_hom_table(1, F(1), 1))


def test_critical_table():
    t = critical_table(1, 3)
    assert [(r["lambda"], r["mu"]) for r in t["pairs"]] == [("0", "1"), ("-1/2", "3/2"), ("-1", "2")]
    assert t["rows"][0]["deltas"][0] == {"q": 0, "p": 1, "delta": "1"}
    assert "pairs" not in critical_table(2, 2)
