"""Coefficient modules for cochain complexes.

Every module exposes a monomial basis (hashable, sortable keys) with

* ``act(i, key)``: the action of the i-th algebra basis vector, as ``{key: coeff}``
* ``weight(key)``: the eigenvalue of the grading element
* ``keys_of_weight(w)``: the finite list of keys with that weight
* ``keys_upto(N)`` and ``xdeg(key)``: bounded enumeration for brute-force checks
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..denstensor import SpaceCtx, SymbolField, WeylOperator, lie_field, lie_op, operator_term_weight
from ..exactalg import ZERO, MultiPoly, compositions, fmt_rational
from ..liealg import embedded_basis
from .algebra import LieAlgebraData, gl_algebra, gl_index


class WeightError(ValueError):
    """The requested weight space is not finite or not defined."""


def _nonneg_int(w: Fraction) -> int | None:
    if w.denominator != 1 or w < 0:
        return None
    return int(w)


class _CachedAction:
    def __init__(self):
        self._cache: dict = {}

    def act(self, i: int, key) -> dict:
        ck = (i, key)
        hit = self._cache.get(ck)
        if hit is None:
            hit = self._act(i, key)
            self._cache[ck] = hit
        return hit

    def _act(self, i: int, key) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


class FieldModule(_CachedAction):
    """Polynomial fields in S_delta^p(R^m); keys are x/xi exponent tuples of length 2m."""

    def __init__(self, m: int, delta, p: int):
        super().__init__()
        self.ctx = SpaceCtx(m, Fraction(delta), p)
        self.m = m

    def describe(self) -> dict:
        return {"kind": "field", "m": self.m, "delta": fmt_rational(self.ctx.weight), "p": self.ctx.xi_degree}

    def xdeg(self, key) -> int:
        return sum(key[: self.m])

    def weight(self, key) -> Fraction:
        return -(self.xdeg(key) - self.ctx.xi_degree + self.m * self.ctx.weight)

    def _keys_with_xdeg(self, n: int) -> list:
        return [a + b for a in compositions(n, self.m) for b in compositions(self.ctx.xi_degree, self.m)]

    def keys_of_weight(self, w) -> list:
        n = _nonneg_int(self.ctx.xi_degree - self.m * self.ctx.weight - Fraction(w))
        return [] if n is None else self._keys_with_xdeg(n)

    def keys_upto(self, N: int) -> list:
        return [k for n in range(N + 1) for k in self._keys_with_xdeg(n)]

    def _act(self, i: int, key) -> dict:
        P = SymbolField(self.ctx, MultiPoly._raw(self.m, {key: Fraction(1)}))
        return lie_field(embedded_basis(self.m)[i], P).value.terms

    def to_element(self, vec: dict) -> SymbolField:
        return SymbolField(self.ctx, MultiPoly(self.m, vec))

    def serialize(self, vec: dict) -> str:
        return self.to_element(vec).to_text()


class OperatorModule(_CachedAction):
    """Differential operators S_src -> S_tgt of order <= order_cap, in canonical term keys."""

    def __init__(self, src: SpaceCtx, tgt: SpaceCtx, order_cap: int):
        super().__init__()
        if src.m != tgt.m:
            raise ValueError("dimension mismatch")
        if order_cap < 0:
            raise ValueError("order cap must be non-negative")
        self.src, self.tgt, self.order_cap = src, tgt, order_cap
        self.m = src.m

    @classmethod
    def densities(cls, m: int, lam, mu, order_cap: int) -> OperatorModule:
        return cls(SpaceCtx(m, Fraction(lam), 0), SpaceCtx(m, Fraction(mu), 0), order_cap)

    @classmethod
    def symbols(cls, m: int, delta, p: int, q: int, order_cap: int) -> OperatorModule:
        return cls(SpaceCtx(m, Fraction(delta), p), SpaceCtx(m, Fraction(delta), q), order_cap)

    def describe(self) -> dict:
        return {
            "kind": "operators",
            "m": self.m,
            "src_weight": fmt_rational(self.src.weight),
            "tgt_weight": fmt_rational(self.tgt.weight),
            "p": self.src.xi_degree,
            "q": self.tgt.xi_degree,
            "order_cap": self.order_cap,
        }

    def xdeg(self, key) -> int:
        return sum(key[0])

    def weight(self, key) -> Fraction:
        return operator_term_weight(self.src, self.tgt, key)

    def _keys(self, da: int, order: int) -> list:
        m = self.m
        return [(a, b, d, g)
                for a in compositions(da, m)
                for d in compositions(order, m)
                for b in compositions(self.tgt.xi_degree, m)
                for g in compositions(self.src.xi_degree, m)]

    def keys_of_weight(self, w) -> list:
        shift = Fraction(self.tgt.xi_degree - self.src.xi_degree) - self.m * (self.tgt.weight - self.src.weight)
        out = []
        for order in range(self.order_cap + 1):
            da = _nonneg_int(order + shift - Fraction(w))
            if da is not None:
                out.extend(self._keys(da, order))
        return out

    def keys_upto(self, N: int) -> list:
        return [k for order in range(self.order_cap + 1) for da in range(N + 1) for k in self._keys(da, order)]

    def _act(self, i: int, key) -> dict:
        single = WeylOperator._raw(self.src, self.tgt, {key: Fraction(1)})
        return lie_op(embedded_basis(self.m)[i], single).terms

    def to_element(self, vec: dict) -> WeylOperator:
        return WeylOperator(self.src, self.tgt, vec)

    def serialize(self, vec: dict) -> str:
        return self.to_element(vec).to_text()


# ---------------------------------------------------------------------------
# finite-dimensional representations


class FiniteRep:
    """Matrices rho(b_i) (dense, Fraction) for each basis vector of a Lie algebra."""

    def __init__(self, algebra: LieAlgebraData, mats: Sequence[Sequence[Sequence]], labels=None):
        self.algebra = algebra
        self.mats = [[[Fraction(c) for c in row] for row in M] for M in mats]
        if len(self.mats) != algebra.dim:
            raise ValueError("need one matrix per basis vector")
        self.dim = len(self.mats[0]) if self.mats else 0
        self.labels = list(labels) if labels is not None else [f"v{i}" for i in range(self.dim)]

    def apply(self, i: int, vec: dict) -> dict:
        """rho(b_i) applied to a sparse vector."""
        M = self.mats[i]
        out: dict = {}
        for c, v in vec.items():
            for r in range(self.dim):
                x = M[r][c]
                if x:
                    out[r] = out.get(r, ZERO) + x * v
        return {k: v for k, v in out.items() if v}

    def is_homomorphism(self) -> bool:
        alg = self.algebra
        n = self.dim
        for i in range(alg.dim):
            for j in range(i + 1, alg.dim):
                A, B = self.mats[i], self.mats[j]
                comm = [[sum(A[r][k] * B[k][c] - B[r][k] * A[k][c] for k in range(n)) for c in range(n)]
                        for r in range(n)]
                rhs = [[ZERO] * n for _ in range(n)]
                for l, coef in alg.bracket_coeffs(i, j).items():
                    for r in range(n):
                        for c in range(n):
                            rhs[r][c] += coef * self.mats[l][r][c]
                if comm != rhs:
                    return False
        return True

    def identity_scalar(self) -> Fraction | None:
        """rho(identity matrix) as a scalar, for gl(m) reps; None if not scalar."""
        m = _gl_m(self.algebra)
        n = self.dim
        S = [[sum(self.mats[gl_index(m, i, i)][r][c] for i in range(m)) for c in range(n)] for r in range(n)]
        s = S[0][0] if n else ZERO
        for r in range(n):
            for c in range(n):
                if S[r][c] != (s if r == c else 0):
                    return None
        return s

    # constructors -------------------------------------------------------
    @classmethod
    def trivial(cls, m: int, dim: int = 1) -> FiniteRep:
        alg = gl_algebra(m)
        return cls(alg, [[[0] * dim for _ in range(dim)] for _ in range(alg.dim)])

    @classmethod
    def symmetric_power(cls, m: int, k: int, lam=0) -> FiniteRep:
        """Degree-k polynomials in xi, with E_ij -> xi_i D_xi_j - lam delta_ij."""
        alg = gl_algebra(m)
        keys = list(compositions(k, m))
        pos = {b: t for t, b in enumerate(keys)}
        lam = Fraction(lam)
        mats = []
        for i in range(m):
            for j in range(m):
                M = [[ZERO] * len(keys) for _ in keys]
                for c, b in enumerate(keys):
                    if b[j]:
                        nb = list(b)
                        nb[j] -= 1
                        nb[i] += 1
                        M[pos[tuple(nb)]][c] += b[j]
                    if i == j:
                        M[c][c] -= lam
                mats.append(M)
        return cls(alg, mats, [f"xi^{list(b)}" for b in keys])

    @classmethod
    def exterior_tensor(cls, m: int, u: int, V: FiniteRep) -> "ExteriorTensorRep":
        return ExteriorTensorRep(m, u, V)


def _gl_m(alg: LieAlgebraData) -> int:
    m = int(round(alg.dim ** 0.5))
    if m * m != alg.dim or not alg.name.startswith("gl"):
        raise ValueError("not a gl(m) representation")
    return m


def wedge_sort(seq: Sequence[int]) -> tuple[int, tuple]:
    """(sign, sorted tuple) for e^seq, sign 0 on repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, ()
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, tuple(s)


class ExteriorTensorRep(FiniteRep):
    """Lambda^u(R^m) (x) V, i.e. alternating u-forms on R^m* with values in V.

    Basis index ``(K, r)`` with K an increasing u-tuple; ``e_K`` evaluates to 1 on
    ``(eps^K_1, ..., eps^K_u)``.
    """

    def __init__(self, m: int, u: int, V: FiniteRep):
        from itertools import combinations

        self.m, self.u, self.V = m, u, V
        self.index = [(K, r) for K in combinations(range(m), u) for r in range(V.dim)]
        self.pos = {k: t for t, k in enumerate(self.index)}
        n = len(self.index)
        mats = []
        for i in range(m):
            for j in range(m):
                M = [[ZERO] * n for _ in range(n)]
                gi = gl_index(m, i, j)
                for c, (K, r) in enumerate(self.index):
                    # natural action on e_K: replace e_j by e_i in each slot
                    for slot, kk in enumerate(K):
                        if kk != j:
                            continue
                        sign, NK = wedge_sort(K[:slot] + (i,) + K[slot + 1:])
                        if sign:
                            M[self.pos[(NK, r)]][c] += sign
                    for r2 in range(V.dim):
                        x = V.mats[gi][r2][r]
                        if x:
                            M[self.pos[(K, r2)]][c] += x
                mats.append(M)
        super().__init__(V.algebra, mats, [f"e{list(K)}*{V.labels[r]}" for K, r in self.index])

    def evaluate(self, vec: dict, covectors: Sequence[int]) -> dict:
        """omega(eps^k1, ..., eps^ku) as a sparse V-vector."""
        sign, K = wedge_sort(covectors)
        if not sign:
            return {}
        out = {}
        for t, v in vec.items():
            KK, r = self.index[t]
            if KK == K:
                out[r] = out.get(r, ZERO) + sign * v
        return {k: v for k, v in out.items() if v}


class FiniteModule:
    """A FiniteRep seen as a cochain coefficient module (every key has weight 0)."""

    def __init__(self, rep: FiniteRep):
        self.rep = rep
        self.m = None

    def describe(self) -> dict:
        return {"kind": "finite", "algebra": self.rep.algebra.name, "dim": self.rep.dim}

    def weight(self, key) -> Fraction:
        return Fraction(0)

    def keys_of_weight(self, w) -> list:
        return list(range(self.rep.dim)) if Fraction(w) == 0 else []

    def keys_upto(self, N: int) -> list:
        return list(range(self.rep.dim))

    def xdeg(self, key) -> int:
        return 0

    def act(self, i: int, key) -> dict:
        return self.rep.apply(i, {key: Fraction(1)})

    def serialize(self, vec: dict) -> str:
        return " + ".join(f"({fmt_rational(v)})*{self.rep.labels[k]}" for k, v in sorted(vec.items())) or "0"


class VFieldModule(_CachedAction):
    """Polynomial maps R^m -> V for a gl(m)-rep V, with L_X f = X.f - rho(DX) f."""

    def __init__(self, m: int, rep: FiniteRep):
        super().__init__()
        if rep.algebra != gl_algebra(m):
            raise ValueError("VFieldModule needs a gl(m) representation")
        self.m, self.rep = m, rep

    def describe(self) -> dict:
        return {"kind": "vfield", "m": self.m, "dim": self.rep.dim}

    def xdeg(self, key) -> int:
        return sum(key[0])

    def weight(self, key) -> Fraction:
        s = self.rep.identity_scalar()
        if s is None:
            raise WeightError("rho(identity) is not scalar; no grading")
        return -self.xdeg(key) + s

    def keys_of_weight(self, w) -> list:
        s = self.rep.identity_scalar()
        if s is None:
            raise WeightError("rho(identity) is not scalar; no grading")
        n = _nonneg_int(s - Fraction(w))
        if n is None:
            return []
        return [(a, r) for a in compositions(n, self.m) for r in range(self.rep.dim)]

    def keys_upto(self, N: int) -> list:
        return [(a, r) for n in range(N + 1) for a in compositions(n, self.m) for r in range(self.rep.dim)]

    def _act(self, i: int, key) -> dict:
        m = self.m
        a, r = key
        X = embedded_basis(m)[i]
        f = MultiPoly.monomial(a)
        out: dict = {}

        def put(poly: MultiPoly, vec: dict, scale=1):
            for k, c in poly.terms.items():
                for rr, v in vec.items():
                    kk = (k[:m], rr)
                    out[kk] = out.get(kk, ZERO) + c * v * scale

        put(X.apply(f), {r: Fraction(1)})
        J = X.jacobian()
        for p in range(m):
            for q in range(m):
                if J[p][q]:
                    put(J[p][q] * f, self.rep.apply(gl_index(m, p, q), {r: Fraction(1)}), -1)
        return {k: v for k, v in out.items() if v}

    def serialize(self, vec: dict) -> str:
        return " + ".join(f"({fmt_rational(v)})*x^{list(a)}*{self.rep.labels[r]}"
                          for (a, r), v in sorted(vec.items())) or "0"
