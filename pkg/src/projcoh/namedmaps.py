"""Named operators, cocycles and constants on symbol spaces, plus the splitting and
quantization solvers built on them."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .denstensor import (
    ContextError,
    SpaceCtx,
    SymbolField,
    WeylOperator,
    apply_op,
    compose,
    field_monomials,
    lie_field,
    lie_op,
    lift_phi,
    operator_term_weight,
)
from .exactalg import ONE, ZERO, compositions, fmt_rational, multi_factorial, reduced_echelon
from .liealg import PolyVectorField, SlElement, basis, bracket, dual_basis, embed, embedded_basis

# ---------------------------------------------------------------------------
# T_n, tau_n, gamma_n


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _contraction_terms(m: int, n: int, extra: tuple | None = None) -> dict:
    """sum over |beta| = n of n!/beta! d^beta D_xi^(beta + extra)."""
    z = (0,) * m
    extra = extra or z
    nf = _factorial(n)
    return {(z, z, beta, tuple(b + e for b, e in zip(beta, extra))): Fraction(nf, multi_factorial(beta))
            for beta in compositions(n, m)}


def T_n(n: int, src: SpaceCtx) -> WeylOperator:
    """Full contraction of n x-derivatives against n xi-derivatives, S^p -> S^(p-n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > src.xi_degree:
        warnings.warn(f"T_{n} vanishes on xi-degree {src.xi_degree}; returning the zero operator")
        return WeylOperator.zero(src, SpaceCtx(src.m, src.weight, 0))
    tgt = SpaceCtx(src.m, src.weight, src.xi_degree - n)
    return WeylOperator(src, tgt, _contraction_terms(src.m, n))


def _field(X) -> PolyVectorField:
    return embed(X) if isinstance(X, SlElement) else X


def tau_n(n: int, X, src: SpaceCtx) -> WeylOperator:
    """-(div X) T_n; for n = 0 this is -(div X) times the identity."""
    return T_n(n, src).left_multiply(-_field(X).divergence())


def gamma_n(n: int, X, src: SpaceCtx) -> WeylOperator:
    """(1/(m+1)) sum_i d_i(div X) D_xi_i T_(n-1)."""
    if n < 1:
        raise ValueError("gamma_n needs n >= 1")
    if n > src.xi_degree:
        raise ValueError(f"gamma_{n} needs xi-degree >= {n}")
    m = src.m
    tgt = SpaceCtx(m, src.weight, src.xi_degree - n)
    div = _field(X).divergence()
    out = WeylOperator.zero(src, tgt)
    for i in range(m):
        f = div.dx(i + 1)
        if not f:
            continue
        e_i = tuple(1 if t == i else 0 for t in range(m))
        piece = WeylOperator(src, tgt, _contraction_terms(m, n - 1, e_i))
        out = out + piece.left_multiply(f * Fraction(1, m + 1))
    return out


# ---------------------------------------------------------------------------
# cocycles


def cocycle_defects(c: Callable[[int], WeylOperator], m: int) -> list[tuple[int, int, WeylOperator]]:
    """Basis pairs (i, j) where L_Xi c(Xj) - L_Xj c(Xi) - c([Xi, Xj]) is non-zero."""
    B = basis(m)
    vals = [c(i) for i in range(len(B))]
    bad = []
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            d = lie_op(B[i], vals[j]) - lie_op(B[j], vals[i])
            for l, coef in enumerate(bracket(B[i], B[j]).coords()):
                if coef:
                    d = d - vals[l].scale(coef)
            if d:
                bad.append((i, j, d))
    return bad


def cocycle_check(c: Callable[[int], WeylOperator], m: int) -> bool:
    return not cocycle_defects(c, m)


def tau_cochain(n: int, src: SpaceCtx) -> Callable[[int], WeylOperator]:
    B = basis(src.m)
    return lambda i: tau_n(n, B[i], src)


def gamma_cochain(n: int, src: SpaceCtx) -> Callable[[int], WeylOperator]:
    B = basis(src.m)
    return lambda i: gamma_n(n, B[i], src)


def coboundary_cochain(D: WeylOperator) -> Callable[[int], WeylOperator]:
    B = basis(D.m)
    return lambda i: lie_op(B[i], D)


# ---------------------------------------------------------------------------
# constants


def commutator_constant(n: int, p: int, delta, m: int) -> Fraction:
    """-n((m+1) delta - (m + 2p + n)); p is the xi-degree of the target."""
    return -n * ((m + 1) * Fraction(delta) - (m + 2 * p + n))


def u_k(m: int, lam, k: int) -> Fraction:
    return (m + 1) * Fraction(lam) + k - 1


def v_n(m: int, delta, k: int, n: int) -> Fraction:
    return -n * ((m + 1) * Fraction(delta) - (m + 2 * k - n))


@dataclass(frozen=True)
class CommutatorReport:
    m: int
    n: int
    p: int
    delta: Fraction
    scalar: Fraction | None
    proportional: bool
    expected: Fraction

    @property
    def matches(self) -> bool:
        return self.proportional and self.scalar == self.expected


def _ratio(num: WeylOperator, den: WeylOperator) -> Fraction | None:
    """r with num = r * den, or None."""
    if not den:
        return ZERO if not num else None
    k0 = next(iter(den.terms))
    r = num.terms.get(k0, ZERO) / den.terms[k0]
    return r if num == den.scale(r) else None


def commutator_defect(n: int, p: int, delta, m: int) -> CommutatorReport:
    """Compare L_X T_n with gamma_n(X) for every basis X; T_n : S^(p+n) -> S^p."""
    delta = Fraction(delta)
    src = SpaceCtx(m, delta, p + n)
    T = T_n(n, src)
    expected = commutator_constant(n, p, delta, m)
    scalar = None
    ok = True
    for X in basis(m):
        L = lie_op(X, T)
        if n == 0:
            ok = ok and not L
            scalar = ZERO
            continue
        G = gamma_n(n, X, src)
        if not G:
            ok = ok and not L
            continue
        r = _ratio(L, G)
        if r is None or (scalar is not None and r != scalar):
            ok = False
            continue
        scalar = r
    if scalar is None and ok:
        scalar = ZERO
    return CommutatorReport(m, n, p, delta, scalar if ok else None, ok, expected)


def casimir_formula(m: int, p: int, delta) -> Fraction:
    """c with 2(m+1)c = m(m+1) delta^2 - (m+2p)(m+1) delta + 2p(m+p)."""
    d = Fraction(delta)
    return (m * (m + 1) * d * d - (m + 2 * p) * (m + 1) * d + 2 * p * (m + p)) / (2 * (m + 1))


def casimir(ctx: SpaceCtx, family: Sequence[SlElement] | None = None) -> tuple[WeylOperator, Fraction | None]:
    """sum_i L_Xi o L_Yi over a basis and its Killing dual; returns (C, scalar or None)."""
    from .denstensor import lie_field_op

    B = list(family) if family is not None else basis(ctx.m)
    Y = dual_basis(B)
    C = WeylOperator.zero(ctx, ctx)
    for X, Yi in zip(B, Y):
        C = C + compose(lie_field_op(embed(X), ctx), lie_field_op(embed(Yi), ctx))
    ident = WeylOperator.identity(ctx)
    return C, _ratio(C, ident)


# ---------------------------------------------------------------------------
# the coboundary of the canonical lift


def _symbol_ctx(m: int, lam, mu, k: int) -> SpaceCtx:
    return SpaceCtx(m, Fraction(mu) - Fraction(lam), k)


def Ek_apply(X, P: SymbolField, lam) -> WeylOperator:
    """L_X phi(P) - phi(L_X P)."""
    return lie_op(X, lift_phi(P, lam)) - lift_phi(lie_field(_field(X), P), lam)


def Ek_cocycle(X, m: int, lam, mu, k: int) -> Callable[[SymbolField], WeylOperator]:
    ctx = _symbol_ctx(m, lam, mu, k)

    def E(P: SymbolField) -> WeylOperator:
        if P.ctx != ctx:
            raise ContextError("symbol lives in the wrong space")
        return Ek_apply(X, P, lam)

    return E


def Ek_check(m: int, lam, mu, k: int, xdeg: int = 3) -> bool:
    """E_k(X) = -u_k phi o gamma_1(X) on all monomial k-symbols of x-degree <= xdeg."""
    lam = Fraction(lam)
    ctx = _symbol_ctx(m, lam, mu, k)
    u = u_k(m, lam, k)
    for X in basis(m):
        for P in field_monomials(ctx, xdeg):
            lhs = Ek_apply(X, P, lam)
            rhs = lift_phi(apply_op(gamma_n(1, X, ctx), P), lam).scale(-u)
            if lhs.order() > k - 1 or lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# splitting


def split_critical_deltas(m: int, k: int) -> list[Fraction]:
    return [Fraction(m + j, m + 1) for j in range(k, 2 * k)]


def split_predicate(m: int, lam, mu, k: int) -> tuple[bool, dict]:
    """Exact criterion for the order-k symbol sequence to split."""
    lam, mu = Fraction(lam), Fraction(mu)
    delta = mu - lam
    if delta not in split_critical_deltas(m, k):
        return True, {"reason": "noncritical"}
    n = m + 2 * k - (m + 1) * delta
    assert n.denominator == 1
    n = int(n)
    for i in range(1, n + 1):
        if lam == Fraction(i - k, m + 1):
            return True, {"reason": "resonant-lambda", "n": n, "i": i}
    return False, {"reason": "obstructed", "n": n}


@dataclass
class SplitSolution:
    coefficients: list[Fraction]  # c_0 = 1, c_1 .. c_k
    kernel_dim: int
    equations: int


def _correction_terms(m: int, k: int, general: bool) -> list[tuple[int, tuple]]:
    """Unknown (j, key) pieces: operators S^k -> S^(k-j) of order j, constant coefficients."""
    z = (0,) * m
    out = []
    for j in range(1, k + 1):
        if not general:
            out.append((j, None))
            continue
        for d in compositions(j, m):
            for b in compositions(k - j, m):
                for g in compositions(k, m):
                    out.append((j, (z, b, d, g)))
    return out


def _correction_op(m: int, delta: Fraction, k: int, j: int, key) -> WeylOperator:
    src = SpaceCtx(m, delta, k)
    if key is None:
        return T_n(j, src)
    return WeylOperator(src, SpaceCtx(m, delta, k - j), {key: ONE})


def solve_splitting(m: int, lam, mu, k: int, xdeg: int | None = None, general: bool = False):
    """Find s = phi + sum_j phi o Q_j with L_X s(P) = s(L_X P) for all basis X.

    With ``general=False`` each Q_j is c_j T_j; with ``general=True`` it is an
    arbitrary constant-coefficient operator of order j into S^(k-j).  The test
    symbols run over all monomials of x-degree <= max(3, k+1), which covers the
    order of the defect operator, so a solution is equivariant on every
    polynomial symbol.  Returns a SplitSolution or None.
    """
    lam, mu = Fraction(lam), Fraction(mu)
    delta = mu - lam
    ctx = SpaceCtx(m, delta, k)
    xdeg = max(3, k + 1) if xdeg is None else xdeg
    unknowns = _correction_terms(m, k, general)
    ops = [_correction_op(m, delta, k, j, key) for j, key in unknowns]
    Xs = basis(m)
    fields = embedded_basis(m)
    rows: dict = {}

    def add(eq, col, v):
        if v:
            r = rows.setdefault(eq, {})
            r[col] = r.get(col, ZERO) + v

    ncols = len(ops)
    rhs_col = ncols
    for xi, X in enumerate(Xs):
        Xf = fields[xi]
        for pi, P in enumerate(field_monomials(ctx, xdeg)):
            LP = lie_field(Xf, P)
            base = lift_phi(LP, lam) - lie_op(Xf, lift_phi(P, lam))  # moves E_k to the right side
            for key, v in base.terms.items():
                add((xi, pi, key), rhs_col, v)
            for ci, Q in enumerate(ops):
                col = lie_op(Xf, lift_phi(apply_op(Q, P), lam)) - lift_phi(apply_op(Q, LP), lam)
                for key, v in col.terms.items():
                    add((xi, pi, key), ci, v)
    rref = reduced_echelon(rows.values())
    if rhs_col in rref:
        return None
    # particular solution with free variables set to zero
    sol = [ZERO] * ncols
    for piv, row in rref.items():
        sol[piv] = row.get(rhs_col, ZERO)
    kernel_dim = ncols - len(rref)
    if general:
        coeffs = _project_on_contractions(m, delta, k, unknowns, sol)
    else:
        coeffs = [ONE] + sol
    return SplitSolution(coeffs, kernel_dim, len(rows))


def _project_on_contractions(m, delta, k, unknowns, sol) -> list:
    """Read c_j off a general solution when Q_j is a multiple of T_j (else None)."""
    coeffs: list = [ONE]
    for j in range(1, k + 1):
        Q = WeylOperator.zero(SpaceCtx(m, delta, k), SpaceCtx(m, delta, k - j))
        for (jj, key), c in zip(unknowns, sol):
            if jj == j and c:
                Q = Q + _correction_op(m, delta, k, jj, key).scale(c)
        coeffs.append(_ratio(Q, T_n(j, SpaceCtx(m, delta, k))))
    return coeffs


@dataclass
class SplitReport:
    m: int
    k: int
    lam: Fraction
    mu: Fraction
    delta: Fraction
    split: bool
    predicate: bool
    solver: bool
    witness: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.predicate == self.solver

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "lambda": fmt_rational(self.lam),
            "mu": fmt_rational(self.mu),
            "delta": fmt_rational(self.delta),
            "split": self.split,
            "predicate": self.predicate,
            "solver": self.solver,
            "consistent": self.consistent,
            "witness": self.witness,
        }


def split_decision(m: int, lam, mu, k: int, general: bool = False) -> SplitReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    lam, mu = Fraction(lam), Fraction(mu)
    pred, info = split_predicate(m, lam, mu, k)
    sol = solve_splitting(m, lam, mu, k, general=general)
    witness = dict(info)
    if sol is not None:
        witness["coefficients"] = [None if c is None else fmt_rational(c) for c in sol.coefficients]
        witness["kernel_dim"] = sol.kernel_dim
    return SplitReport(m, k, lam, mu, mu - lam, sol is not None, pred, sol is not None, witness)


# ---------------------------------------------------------------------------
# quantization


def expected_coefficients(m: int, lam, mu, k: int) -> list[Fraction] | None:
    """c_n = (u_k ... u_(k-n+1)) / (v_1 ... v_n), or None if some v_n vanishes."""
    delta = Fraction(mu) - Fraction(lam)
    out = [ONE]
    for n in range(1, k + 1):
        v = v_n(m, delta, k, n)
        if not v:
            return None
        out.append(out[-1] * u_k(m, lam, k - n + 1) / v)
    return out


@dataclass
class QuantizationLevel:
    k: int
    coefficients: list[Fraction] | None
    kernel_dim: int | None
    expected: list[Fraction] | None

    @property
    def exists(self) -> bool:
        return self.coefficients is not None

    def ratio_signs(self) -> list[int | None]:
        """Sign of (c_n / c_(n-1)) / (u_(k-n+1) / v_n); None where undefined."""
        out: list[int | None] = []
        if not self.coefficients or not self.expected:
            return out
        for n in range(1, self.k + 1):
            a, b = self.coefficients[n], self.expected[n]
            if b == 0 or a is None:
                out.append(None if a != 0 else 0)
            else:
                q = a / b
                out.append(1 if q == 1 else (-1 if q == -1 else None))
        return out


def quantization_map(m: int, lam, mu, K: int) -> list[QuantizationLevel]:
    levels = [QuantizationLevel(0, [ONE], 0, [ONE])]
    for k in range(1, K + 1):
        sol = solve_splitting(m, lam, mu, k)
        levels.append(QuantizationLevel(
            k,
            None if sol is None else sol.coefficients,
            None if sol is None else sol.kernel_dim,
            expected_coefficients(m, lam, mu, k),
        ))
    return levels


def quantize_symbol(P: SymbolField, lam, coefficients: Sequence[Fraction]) -> WeylOperator:
    """sum_j c_j phi(T_j P)."""
    out = None
    for j, c in enumerate(coefficients):
        if j > P.ctx.xi_degree:
            break
        if not c:
            continue
        piece = lift_phi(apply_op(T_n(j, P.ctx), P), lam).scale(c)
        out = piece if out is None else out + piece
    if out is None:
        return lift_phi(SymbolField.zero(P.ctx), lam)
    return out


def verify_quantization(m: int, lam, mu, k: int, coefficients: Sequence[Fraction], xdeg: int = 3) -> bool:
    ctx = _symbol_ctx(m, lam, mu, k)
    for Xf in embedded_basis(m):
        for P in field_monomials(ctx, xdeg):
            if lie_op(Xf, quantize_symbol(P, lam, coefficients)) != quantize_symbol(lie_field(Xf, P), lam, coefficients):
                return False
    return True


# ---------------------------------------------------------------------------
# equivariant maps


def _weight_zero_keys(src: SpaceCtx, tgt: SpaceCtx, order_bound: int, xdeg_bound: int) -> list:
    m = src.m
    out = []
    for o in range(order_bound + 1):
        for da in range(xdeg_bound + 1):
            for a in compositions(da, m):
                for d in compositions(o, m):
                    for b in compositions(tgt.xi_degree, m):
                        for g in compositions(src.xi_degree, m):
                            key = (a, b, d, g)
                            if operator_term_weight(src, tgt, key) == 0:
                                out.append(key)
    return out


def equivariant_homs(src: SpaceCtx, tgt: SpaceCtx, order_bound: int, xdeg_bound: int) -> list[WeylOperator]:
    """Basis of operators of order <= order_bound commuting with every L_X.

    Only grading-weight-zero terms are used: commuting with the grading field
    forces every solution into that weight space, so no solution is lost.
    """
    if src.m != tgt.m:
        raise ContextError("dimension mismatch")
    keys = _weight_zero_keys(src, tgt, order_bound, xdeg_bound)
    if not keys:
        return []
    cols = []
    for key in keys:
        single = WeylOperator(src, tgt, {key: ONE})
        col = {}
        for xi, Xf in enumerate(embedded_basis(src.m)):
            for k2, v in lie_op(Xf, single).terms.items():
                col[(xi, k2)] = v
        cols.append(col)
    # kernel of the column system: find relations sum c_i col_i = 0
    eq_index: dict = {}
    rows: dict = {}
    for ci, col in enumerate(cols):
        for eq, v in col.items():
            rows.setdefault(eq_index.setdefault(eq, len(eq_index)), {})[ci] = v
    rref = reduced_echelon(rows.values())
    free = [c for c in range(len(keys)) if c not in rref]
    out = []
    for f in free:
        vec = {keys[f]: ONE}
        for piv, row in rref.items():
            if f in row:
                vec[keys[piv]] = -row[f]
        out.append(WeylOperator(src, tgt, vec))
    return out


def symbol_hom_table(m: int, delta, K: int, order_bound: int | None = None) -> dict[tuple[int, int], list[WeylOperator]]:
    """Equivariant operators S_delta^k -> S_delta^j for all 0 <= k, j <= K.

    A quantization identifies the operator module with the sum of these symbol
    spaces, so this table describes its equivariant endomorphisms order by order.
    """
    delta = Fraction(delta)
    order_bound = K if order_bound is None else order_bound
    table = {}
    for k in range(K + 1):
        for j in range(K + 1):
            src, tgt = SpaceCtx(m, delta, k), SpaceCtx(m, delta, j)
            table[(k, j)] = equivariant_homs(src, tgt, order_bound, order_bound + max(j - k, 0))
    return table


def is_diagonal_constant(table: dict[tuple[int, int], list[WeylOperator]]) -> bool:
    """Only scalar multiples of the identity on each order, nothing between orders."""
    for (k, j), homs in table.items():
        if k != j:
            if homs:
                return False
            continue
        if len(homs) != 1:
            return False
        if _ratio(homs[0], WeylOperator.identity(homs[0].src)) in (None, ZERO):
            return False
    return True


# ---------------------------------------------------------------------------
# critical values


def critical_delta(m: int, p: int, q: int) -> Fraction:
    return Fraction(m + p + q, m + 1)


def critical_table(m: int, nmax: int, qmax: int = 2) -> dict:
    rows = []
    for n in range(1, nmax + 1):
        rows.append({
            "n": n,
            "deltas": [{"q": q, "p": q + n, "delta": fmt_rational(critical_delta(m, q + n, q))}
                       for q in range(qmax + 1)],
            "split_obstructions": [fmt_rational(d) for d in split_critical_deltas(m, n)],
        })
    out: dict = {"m": m, "rows": rows}
    if m == 1:
        out["pairs"] = [{"n": n, "lambda": fmt_rational(Fraction(1 - n, 2)), "mu": fmt_rational(Fraction(1 + n, 2))}
                        for n in range(1, nmax + 1)]
    return out
