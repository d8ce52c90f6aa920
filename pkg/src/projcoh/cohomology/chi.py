"""Transfer of gl(m)-cochains to sl(m+1)-cochains with polynomial coefficients,
and the finite-dimensional gl(m) complexes that feed it."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

from ..exactalg import ZERO, MultiPoly, QMatrix, mat_rank_kernel
from ..liealg import embedded_basis
from .algebra import gl_algebra, gl_index, sl_algebra
from .complex import BettiReport, Cochain, betti, ce_lie
from .modules import ExteriorTensorRep, FiniteModule, FiniteRep, VFieldModule, wedge_sort


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def gl_cochain(t: int, rep: FiniteRep, values: dict) -> Cochain:
    """A t-cochain on gl(m) with values in ``rep`` (sparse vectors over rep indices)."""
    return Cochain(t, gl_algebra(_rep_m(rep)), FiniteModule(rep), values)


def _rep_m(rep: FiniteRep) -> int:
    m = int(round(rep.algebra.dim ** 0.5))
    return m


def _jacobian_terms(m: int, i: int) -> list[tuple[int, MultiPoly]]:
    """DX_i as [(gl index, polynomial coefficient)]."""
    J = embedded_basis(m)[i].jacobian()
    return [(gl_index(m, a, b), J[a][b]) for a in range(m) for b in range(m) if J[a][b]]


def _dtr_terms(m: int, i: int) -> list[tuple[int, MultiPoly]]:
    """d(div X_i) as [(covector index, polynomial coefficient)]."""
    div = embedded_basis(m)[i].divergence()
    return [(k, div.dx(k + 1)) for k in range(m) if div.dx(k + 1)]


def chi(gamma: Cochain, u: int, V: FiniteRep, target: VFieldModule | None = None) -> Cochain:
    """sl(m+1)-cochain of degree t+u built from a gl(m)-cochain gamma valued in Lambda^u(R^m) (x) V.

    (X_0..X_(t+u-1)) -> (-1)^t / (t! u! (m+1)^u) sum_nu sign(nu)
                         gamma(DX_nu0, ..)(d tr DX_nu_t, ..)
    """
    rep = gamma.module.rep
    if not isinstance(rep, ExteriorTensorRep) or rep.u != u or rep.V is not V:
        raise ValueError("gamma must take values in FiniteRep.exterior_tensor(m, u, V)")
    m = rep.m
    t = gamma.degree
    s = t + u
    target = target or VFieldModule(m, V)
    sl = sl_algebra(m)
    pref = Fraction((-1) ** t, _factorial(t) * _factorial(u) * (m + 1) ** u)
    jac = {i: _jacobian_terms(m, i) for i in range(sl.dim)}
    dtr = {i: _dtr_terms(m, i) for i in range(sl.dim)}
    out: dict = {}
    for J in combinations(range(sl.dim), s):
        val: dict = {}
        for perm in permutations(range(s)):
            sgn = _perm_sign(perm)
            order = [J[p] for p in perm]
            gl_slots = [jac[i] for i in order[:t]]
            co_slots = [dtr[i] for i in order[t:]]
            if any(not x for x in gl_slots) or any(not x for x in co_slots):
                continue
            for gl_choice in product(*gl_slots):
                g_sign, G = wedge_sort([g for g, _ in gl_choice])
                if not g_sign:
                    continue
                gval = gamma.values.get(G)
                if not gval:
                    continue
                poly_g = MultiPoly.const(m, 1)
                for _, f in gl_choice:
                    poly_g = poly_g * f
                for co_choice in product(*co_slots):
                    vvec = rep.evaluate(gval, [k for k, _ in co_choice])
                    if not vvec:
                        continue
                    poly = poly_g
                    for _, f in co_choice:
                        poly = poly * f
                    scale = pref * sgn * g_sign
                    for exps, c in poly.terms.items():
                        for r, v in vvec.items():
                            key = (exps[:m], r)
                            nv = val.get(key, ZERO) + scale * c * v
                            if nv:
                                val[key] = nv
                            else:
                                val.pop(key, None)
        if val:
            out[J] = val
    return Cochain(s, sl, target, out)


def scalar_polynomial(c: Cochain, I) -> MultiPoly:
    """Value of a cochain with one-dimensional V as a polynomial."""
    m = c.module.m
    return MultiPoly(m, {a + (0,) * m: v for (a, r), v in c.evaluate(I).items()})


# ---------------------------------------------------------------------------
# finite complexes


def finite_ce(rep: FiniteRep, max_degree: int) -> BettiReport:
    """Betti numbers of the full Chevalley-Eilenberg complex of a finite representation."""
    return betti(FiniteModule(rep), max_degree, algebra=rep.algebra)


def glinv_dims(m: int) -> tuple[int, ...]:
    """dim of ad-invariants in each exterior power of gl(m)*."""
    alg = gl_algebra(m)
    module = FiniteModule(FiniteRep.trivial(m))
    dims = []
    for s in range(alg.dim + 1):
        cols = list(combinations(range(alg.dim), s))
        rows: dict = {}
        index: dict = {}
        for ci, I in enumerate(cols):
            c = Cochain(s, alg, module, {I: {0: 1}})
            for j in range(alg.dim):
                for J, vec in ce_lie(j, c).values.items():
                    r = index.setdefault((j, J), len(index))
                    rows.setdefault(r, {})[ci] = vec.get(0, ZERO)
        M = QMatrix(len(index), len(cols), {(r, c): v for r, row in rows.items() for c, v in row.items() if v})
        rk, _ = mat_rank_kernel(M) if index else (0, None)
        dims.append(len(cols) - rk)
    return tuple(dims)


def trace_cochain(m: int) -> Cochain:
    """gamma(A) = tr A as a 1-cochain with values in Lambda^0 (x) R."""
    V = FiniteRep.trivial(m)
    rep = FiniteRep.exterior_tensor(m, 0, V)
    return Cochain(1, gl_algebra(m), FiniteModule(rep), {(gl_index(m, i, i),): {0: 1} for i in range(m)})


def unit_cochain(m: int) -> Cochain:
    V = FiniteRep.trivial(m)
    rep = FiniteRep.exterior_tensor(m, 0, V)
    return Cochain(0, gl_algebra(m), FiniteModule(rep), {(): {0: 1}})
