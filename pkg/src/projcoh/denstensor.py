"""Density-valued symmetric tensor fields and differential operators between them.

A field in S_delta^p(R^m) with polynomial coefficients is a polynomial in
``x`` and ``xi`` that is homogeneous of degree ``p`` in ``xi``.  Operators are
normal-ordered sums ``c * x^a xi^b d_x^d D_xi^g`` (multiplications left of
derivatives).  On inputs of xi-degree ``p`` two such sums can act identically,
so :class:`WeylOperator` always stores the canonical representative in which
every term carries exactly ``|g| = p`` xi-derivatives; this makes equality of
operators plain equality of term dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .exactalg import ONE, ZERO, MultiPoly, compositions, falling, fmt_rational, multi_factorial
from .liealg import PolyVectorField, SlElement, embed, grading_element

Key = tuple  # (a, b, d, g), each a tuple of m ints


@dataclass(frozen=True)
class SpaceCtx:
    """Weight and xi-degree of a tensor density space S_weight^xi_degree(R^m)."""

    m: int
    weight: Fraction
    xi_degree: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.xi_degree < 0:
            raise ValueError("xi_degree must be non-negative")
        object.__setattr__(self, "weight", Fraction(self.weight))

    def describe(self) -> dict:
        return {"m": self.m, "weight": fmt_rational(self.weight), "xi_degree": self.xi_degree}


def density(m: int, weight) -> SpaceCtx:
    return SpaceCtx(m, Fraction(weight), 0)


@dataclass(frozen=True)
class OperatorCtx:
    src: SpaceCtx
    tgt: SpaceCtx
    order_cap: int | None = None

    def __post_init__(self):
        if self.src.m != self.tgt.m:
            raise ValueError("source and target must have the same m")
        if self.order_cap is not None and self.order_cap < 0:
            raise ValueError("order cap must be non-negative")


class ContextError(ValueError):
    """Operator or field used with an incompatible space."""


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class SymbolField:
    ctx: SpaceCtx
    value: MultiPoly

    def __post_init__(self):
        if self.value.m != self.ctx.m:
            raise ContextError("field polynomial has the wrong number of variables")
        if not self.value.is_xi_homogeneous(self.ctx.xi_degree):
            raise ContextError(f"field is not homogeneous of xi-degree {self.ctx.xi_degree}")

    @classmethod
    def monomial(cls, ctx: SpaceCtx, a, b=None, coeff=1) -> SymbolField:
        b = tuple(b) if b is not None else (0,) * ctx.m
        return cls(ctx, MultiPoly.monomial(a, b, coeff))

    @classmethod
    def zero(cls, ctx: SpaceCtx) -> SymbolField:
        return cls(ctx, MultiPoly.zero(ctx.m))

    def __add__(self, other: SymbolField) -> SymbolField:
        if other.ctx != self.ctx:
            raise ContextError("cannot add fields from different spaces")
        return SymbolField(self.ctx, self.value + other.value)

    def __sub__(self, other: SymbolField) -> SymbolField:
        return self + other.scale(-1)

    def scale(self, c) -> SymbolField:
        return SymbolField(self.ctx, self.value * Fraction(c))

    def __bool__(self) -> bool:
        return bool(self.value)

    def to_text(self) -> str:
        return _field_text(self.value)

    def to_json(self) -> dict:
        return {"space": self.ctx.describe(), "terms": [
            {"x": list(k[: self.ctx.m]), "xi": list(k[self.ctx.m:]), "c": fmt_rational(v)}
            for k, v in self.value.sorted_terms()]}


def _field_text(P: MultiPoly) -> str:
    m = P.m
    if not P.terms:
        return "0"
    return " + ".join(f"({fmt_rational(v)})*x^{list(k[:m])}*xi^{list(k[m:])}" for k, v in P.sorted_terms())


def field_monomials(ctx: SpaceCtx, max_x_degree: int) -> list[SymbolField]:
    """All monomial fields x^a xi^b with |a| <= max_x_degree, |b| = xi_degree."""
    out = []
    for da in range(max_x_degree + 1):
        for a in compositions(da, ctx.m):
            for b in compositions(ctx.xi_degree, ctx.m):
                out.append(SymbolField.monomial(ctx, a, b))
    return out


# ---------------------------------------------------------------------------
# operators


def _add(v: tuple, w: tuple) -> tuple:
    return tuple(i + j for i, j in zip(v, w))


def _sub(v: tuple, w: tuple) -> tuple:
    return tuple(i - j for i, j in zip(v, w))


def _geq(v: tuple, w: tuple) -> bool:
    return all(i >= j for i, j in zip(v, w))


@lru_cache(maxsize=None)
def _leibniz(d: tuple, a: tuple) -> tuple:
    """d^d x^a = sum_k coef x^(a-k) d^(d-k); returns ((k, coef), ...)."""
    ranges = [range(min(di, ai) + 1) for di, ai in zip(d, a)]
    out = []

    def rec(i, k, coef):
        if i == len(d):
            out.append((tuple(k), coef))
            return
        for ki in ranges[i]:
            c = coef * _binom(d[i], ki) * falling(a[i], ki)
            rec(i + 1, k + [ki], c)

    rec(0, [], 1)
    return tuple(out)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


@lru_cache(maxsize=None)
def _completions(g: tuple, p: int) -> tuple:
    """(r, 1/r!) for all r with |r| = p - |g|."""
    rest = p - sum(g)
    return tuple((r, Fraction(1, multi_factorial(r))) for r in compositions(rest, len(g)))


class WeylOperator:
    """Differential operator between two tensor density spaces, in canonical normal order."""

    __slots__ = ("src", "tgt", "terms")

    def __init__(self, src: SpaceCtx, tgt: SpaceCtx, terms: Mapping[Key, Fraction] | Iterable = ()):
        if src.m != tgt.m:
            raise ContextError("source and target must share m")
        self.src = src
        self.tgt = tgt
        items = terms.items() if isinstance(terms, Mapping) else terms
        self.terms = _canonical(src, tgt, items)

    @classmethod
    def _raw(cls, src, tgt, terms) -> WeylOperator:
        obj = cls.__new__(cls)
        obj.src, obj.tgt, obj.terms = src, tgt, terms
        return obj

    @classmethod
    def zero(cls, src: SpaceCtx, tgt: SpaceCtx) -> WeylOperator:
        return cls._raw(src, tgt, {})

    @classmethod
    def identity(cls, ctx: SpaceCtx) -> WeylOperator:
        z = (0,) * ctx.m
        return cls(ctx, ctx, {(z, z, z, z): ONE})

    @classmethod
    def multiplication(cls, f: MultiPoly, ctx: SpaceCtx, tgt: SpaceCtx | None = None) -> WeylOperator:
        """Multiplication by an x-polynomial."""
        tgt = tgt or ctx
        z = (0,) * ctx.m
        m = ctx.m
        return cls(ctx, tgt, {(k[:m], z, z, z): v for k, v in f.terms.items()})

    # algebra ------------------------------------------------------------
    def _same_spaces(self, other: WeylOperator) -> None:
        if self.src != other.src or self.tgt != other.tgt:
            raise ContextError("operators act between different spaces")

    def __add__(self, other: WeylOperator) -> WeylOperator:
        self._same_spaces(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, ZERO) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return WeylOperator._raw(self.src, self.tgt, out)

    def __neg__(self) -> WeylOperator:
        return WeylOperator._raw(self.src, self.tgt, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: WeylOperator) -> WeylOperator:
        return self + (-other)

    def scale(self, c) -> WeylOperator:
        c = Fraction(c)
        if not c:
            return WeylOperator.zero(self.src, self.tgt)
        return WeylOperator._raw(self.src, self.tgt, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, c) -> WeylOperator:
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.src, self.tgt, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def left_multiply(self, f: MultiPoly) -> WeylOperator:
        """The operator P -> f * D(P) for an x-polynomial f."""
        m = self.src.m
        out: dict = {}
        for (a, b, d, g), v in self.terms.items():
            for k, w in f.terms.items():
                key = (_add(a, k[:m]), b, d, g)
                nv = out.get(key, ZERO) + v * w
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return WeylOperator._raw(self.src, self.tgt, out)

    # inspection ---------------------------------------------------------
    @property
    def m(self) -> int:
        return self.src.m

    def order(self) -> int:
        """Highest number of x-derivatives (-1 for the zero operator)."""
        return max((sum(d) for (_, _, d, _) in self.terms), default=-1)

    def max_x_degree(self) -> int:
        return max((sum(a) for (a, _, _, _) in self.terms), default=-1)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({fmt_rational(v)})*x^{list(a)}*xi^{list(b)}*dx^{list(d)}*Dxi^{list(g)}"
            for (a, b, d, g), v in self.sorted_terms())

    def to_json(self) -> dict:
        return {
            "src": self.src.describe(),
            "tgt": self.tgt.describe(),
            "terms": [{"x": list(a), "xi": list(b), "dx": list(d), "dxi": list(g), "c": fmt_rational(v)}
                      for (a, b, d, g), v in self.sorted_terms()],
        }

    def __repr__(self) -> str:
        return f"WeylOperator({self.to_text()})"


def _canonical(src: SpaceCtx, tgt: SpaceCtx, items) -> dict:
    p, q = src.xi_degree, tgt.xi_degree
    m = src.m
    out: dict = {}
    for key, c in items:
        c = Fraction(c)
        if not c:
            continue
        a, b, d, g = (tuple(t) for t in key)
        if not (len(a) == len(b) == len(d) == len(g) == m):
            raise ContextError(f"term {key} has wrong length for m={m}")
        if sum(b) - sum(g) != q - p:
            raise ContextError(f"term {key} does not map xi-degree {p} to {q}")
        sg = sum(g)
        if sg > p:
            continue
        if sg == p:
            expanded = ((key, c),)
        else:
            expanded = (((a, _add(b, r), d, _add(g, r)), c * w) for r, w in _completions(g, p))
        for k2, c2 in expanded:
            nv = out.get(k2, ZERO) + c2
            if nv:
                out[k2] = nv
            else:
                out.pop(k2, None)
    return out


def apply_op(D: WeylOperator, P: SymbolField) -> SymbolField:
    if P.ctx != D.src:
        raise ContextError(f"field lives in {P.ctx}, operator expects {D.src}")
    m = D.m
    out: dict = {}
    for (a, b, d, g), c in D.terms.items():
        for k, v in P.value.terms.items():
            e, kap = k[:m], k[m:]
            if not (_geq(e, d) and _geq(kap, g)):
                continue
            coef = c * v
            for ei, di in zip(e, d):
                coef *= falling(ei, di)
            for ki, gi in zip(kap, g):
                coef *= falling(ki, gi)
            nk = _add(a, _sub(e, d)) + _add(b, _sub(kap, g))
            nv = out.get(nk, ZERO) + coef
            if nv:
                out[nk] = nv
            else:
                out.pop(nk, None)
    return SymbolField(D.tgt, MultiPoly._raw(m, out))


def compose(D2: WeylOperator, D1: WeylOperator) -> WeylOperator:
    """D2 o D1, normal ordered with [d_i, x^j] = delta and [D_xi_i, xi_j] = delta."""
    if D1.tgt != D2.src:
        raise ContextError(f"cannot compose: {D1.tgt} != {D2.src}")
    out: dict = {}
    for (a2, b2, d2, g2), c2 in D2.terms.items():
        for (a1, b1, d1, g1), c1 in D1.terms.items():
            c = c2 * c1
            for kx, cx in _leibniz(d2, a1):
                a = _add(a2, _sub(a1, kx))
                d = _add(_sub(d2, kx), d1)
                for kxi, cxi in _leibniz(g2, b1):
                    key = (a, _add(b2, _sub(b1, kxi)), d, _add(_sub(g2, kxi), g1))
                    nv = out.get(key, ZERO) + c * cx * cxi
                    if nv:
                        out[key] = nv
                    else:
                        out.pop(key, None)
    return WeylOperator(D1.src, D2.tgt, out)


# ---------------------------------------------------------------------------
# Lie derivatives


def lie_field(X: PolyVectorField, P: SymbolField) -> SymbolField:
    """L_X P = X.P - (d_j X^i) xi_i D_xi_j P + weight (div X) P."""
    if X.m != P.ctx.m:
        raise ContextError("dimension mismatch")
    m = X.m
    val = P.value
    out = X.apply(val)
    J = X.jacobian()
    for i in range(m):
        xi_i = MultiPoly.xi(m, i + 1)
        for j in range(m):
            if J[i][j]:
                out = out - J[i][j] * xi_i * val.dxi(j + 1)
    if P.ctx.weight:
        out = out + X.divergence() * val * P.ctx.weight
    return SymbolField(P.ctx, out)


@lru_cache(maxsize=4096)
def lie_field_op(X: PolyVectorField, ctx: SpaceCtx) -> WeylOperator:
    """The first-order operator P -> L_X P on S_ctx."""
    m = ctx.m
    z = (0,) * m
    terms: dict = {}

    def put(key, c):
        nv = terms.get(key, ZERO) + c
        if nv:
            terms[key] = nv
        else:
            terms.pop(key, None)

    for j in range(m):
        e_j = tuple(1 if t == j else 0 for t in range(m))
        for k, v in X[j].terms.items():
            put((k[:m], z, e_j, z), v)
    J = X.jacobian()
    if ctx.xi_degree:
        for i in range(m):
            e_i = tuple(1 if t == i else 0 for t in range(m))
            for j in range(m):
                e_j = tuple(1 if t == j else 0 for t in range(m))
                for k, v in J[i][j].terms.items():
                    put((k[:m], e_i, z, e_j), -v)
    if ctx.weight:
        for k, v in X.divergence().terms.items():
            put((k[:m], z, z, z), v * ctx.weight)
    return WeylOperator(ctx, ctx, terms)


def _as_field(X) -> PolyVectorField:
    return embed(X) if isinstance(X, SlElement) else X


def lie_op(X, D: WeylOperator) -> WeylOperator:
    """L_X D = L_X o D - D o L_X (tgt and src Lie derivatives)."""
    X = _as_field(X)
    return compose(lie_field_op(X, D.tgt), D) - compose(D, lie_field_op(X, D.src))


def lie_op_explicit(X, D: WeylOperator) -> WeylOperator:
    """L_X D assembled term by term from the symbolic five-term formula.

    (X.T_D) + <X,eta> T_D + w_tgt <X,zeta> T_D - X(zeta D_xi) T_D
      - T_D(eta + zeta, <X,eta> P + w_src <X,zeta> P - X(zeta D_xi) P)

    eta stands for x-derivatives of the argument, zeta for x-derivatives of the
    coefficients of X.  Independent of :func:`lie_op`; used as a cross-check.
    """
    X = _as_field(X)
    m = D.m
    z = (0,) * m
    src, tgt = D.src, D.tgt
    J = X.jacobian()
    div = X.divergence()
    unit = [tuple(1 if t == i else 0 for t in range(m)) for i in range(m)]
    acc: dict = {}

    def put(key, c):
        if not c:
            return
        nv = acc.get(key, ZERO) + c
        if nv:
            acc[key] = nv
        else:
            acc.pop(key, None)

    def xpoly_terms(f: MultiPoly):
        return [(k[:m], v) for k, v in f.terms.items()]

    for (a, b, d, g), c in D.terms.items():
        coeff = MultiPoly.monomial(a, None, c)
        # 1. X.T_D: X acts on the coefficient functions
        for k, v in xpoly_terms(X.apply(coeff)):
            put((k, b, d, g), v)
        # 2. <X, eta> T_D
        for j in range(m):
            for k, v in xpoly_terms(X[j] * coeff):
                put((k, b, _add(d, unit[j]), g), v)
        # 3. w_tgt <X, zeta> T_D
        if tgt.weight:
            for k, v in xpoly_terms(div * coeff):
                put((k, b, d, g), v * tgt.weight)
        # 4. - X(zeta D_xi) T_D, acting on the output xi-polynomial
        for i in range(m):
            for j in range(m):
                if not J[i][j] or not b[j]:
                    continue
                nb = _add(_sub(b, unit[j]), unit[i])
                for k, v in xpoly_terms(J[i][j] * coeff):
                    put((k, nb, d, g), -v * b[j])
        # 5. - T_D(eta + zeta, Q): (eta+zeta)^d = sum_k C(d,k) zeta^k eta^(d-k)
        pieces = []  # (function f of X, extra eta multi-index, xi-operator (b', g') or None)
        for j in range(m):
            pieces.append((X[j], unit[j], None))
        if src.weight:
            pieces.append((div * src.weight, z, None))
        for i in range(m):
            for j in range(m):
                if J[i][j]:
                    pieces.append((-J[i][j], z, (unit[i], unit[j])))
        for f, eta_extra, xiop in pieces:
            for kz, cz in _multi_binomials(d):
                fz = f
                for t, times in enumerate(kz):
                    for _ in range(times):
                        fz = fz.dx(t + 1)
                if not fz:
                    continue
                dd = _add(_sub(d, kz), eta_extra)
                if xiop is None:
                    xi_terms = [((b, g), ONE)]
                else:
                    bi, gj = xiop
                    # D_xi^g o (xi^bi D_xi^gj) normal ordered
                    xi_terms = [((_add(b, _sub(bi, kx)), _add(_sub(g, kx), gj)), Fraction(cx))
                                for kx, cx in _leibniz(g, bi)]
                for k, v in xpoly_terms(fz * coeff):
                    for (nb, ng), cx in xi_terms:
                        put((k, nb, dd, ng), -v * cz * cx)
    return WeylOperator(src, tgt, acc)


@lru_cache(maxsize=None)
def _multi_binomials(d: tuple) -> tuple:
    out = []

    def rec(i, k, coef):
        if i == len(d):
            out.append((tuple(k), coef))
            return
        for ki in range(d[i] + 1):
            rec(i + 1, k + [ki], coef * _binom(d[i], ki))

    rec(0, [], 1)
    return tuple(out)


# ---------------------------------------------------------------------------
# symbols, lift, grading


def symbol(D: WeylOperator, k: int) -> WeylOperator:
    """Order-k slice of an operator of order <= k."""
    if D.order() > k:
        raise ValueError(f"operator has order {D.order()} > {k}")
    return WeylOperator._raw(D.src, D.tgt, {key: v for key, v in D.terms.items() if sum(key[2]) == k})


def symbol_field(D: WeylOperator, k: int) -> SymbolField:
    """Principal symbol of a density operator as a field in S_delta^k."""
    if D.src.xi_degree or D.tgt.xi_degree:
        raise ContextError("symbol_field is defined for operators between densities")
    top = symbol(D, k)
    m = D.m
    ctx = SpaceCtx(m, D.tgt.weight - D.src.weight, k)
    return SymbolField(ctx, MultiPoly(m, {a + d: v for (a, _, d, _), v in top.terms.items()}))


def lift_phi(P: SymbolField, lam=0) -> WeylOperator:
    """x^a xi^b  ->  x^a d^b, from lam-densities to (lam + delta)-densities."""
    m = P.ctx.m
    lam = Fraction(lam)
    src = density(m, lam)
    tgt = density(m, lam + P.ctx.weight)
    z = (0,) * m
    return WeylOperator(src, tgt, {(k[:m], z, k[m:], z): v for k, v in P.value.terms.items()})


def _proportionality(new: dict, old: dict) -> Fraction | None:
    if not old:
        return ZERO if not new else None
    if set(new) - set(old):
        return None
    k0 = next(iter(old))
    w = new.get(k0, ZERO) / old[k0]
    for k, v in old.items():
        if new.get(k, ZERO) != w * v:
            return None
    return w


def euler_weight(v) -> Fraction | None:
    """Eigenvalue of L_Z with Z* = -x^i d_i (Z = identity of gl), or None."""
    if isinstance(v, SymbolField):
        Z = embed(grading_element(v.ctx.m))
        return _proportionality(lie_field(Z, v).value.terms, v.value.terms)
    if isinstance(v, WeylOperator):
        Z = embed(grading_element(v.m))
        return _proportionality(lie_op(Z, v).terms, v.terms)
    raise TypeError("euler_weight expects a SymbolField or WeylOperator")


def field_monomial_weight(ctx: SpaceCtx, a) -> Fraction:
    return -(sum(a) - ctx.xi_degree + ctx.m * ctx.weight)


def operator_term_weight(src: SpaceCtx, tgt: SpaceCtx, key: Key) -> Fraction:
    a, _, d, _ = key
    return Fraction(-(sum(a) - sum(d)) + (tgt.xi_degree - src.xi_degree)) - src.m * (tgt.weight - src.weight)


def euler_components(v) -> dict[Fraction, object]:
    """Split a field or operator into L_Z eigencomponents, keyed by eigenvalue."""
    if isinstance(v, SymbolField):
        m = v.ctx.m
        parts: dict = {}
        for k, c in v.value.terms.items():
            parts.setdefault(field_monomial_weight(v.ctx, k[:m]), {})[k] = c
        return {w: SymbolField(v.ctx, MultiPoly(m, t)) for w, t in sorted(parts.items())}
    if isinstance(v, WeylOperator):
        parts = {}
        for k, c in v.terms.items():
            parts.setdefault(operator_term_weight(v.src, v.tgt, k), {})[k] = c
        return {w: WeylOperator._raw(v.src, v.tgt, t) for w, t in sorted(parts.items())}
    raise TypeError("euler_components expects a SymbolField or WeylOperator")


def iso_m1(D: WeylOperator) -> WeylOperator:
    """D(S_delta^p(R), S_delta^q(R)) -> D_{delta-p, delta-q}(R), via f xi^p <-> f |dt|^(delta-p)."""
    if D.m != 1:
        raise ValueError("the density isomorphism is only defined for m = 1")
    p, q = D.src.xi_degree, D.tgt.xi_degree
    src = density(1, D.src.weight - p)
    tgt = density(1, D.tgt.weight - q)
    scale = 1
    for i in range(2, p + 1):
        scale *= i
    z = (0,)
    return WeylOperator(src, tgt, {(a, z, d, z): v * scale for (a, _, d, _), v in D.terms.items()})


def operator_basis_terms(src: SpaceCtx, tgt: SpaceCtx, order: int, x_degree: int) -> list[Key]:
    """Canonical term keys with |d| = order and |a| = x_degree."""
    m = src.m
    out = []
    for a in compositions(x_degree, m):
        for d in compositions(order, m):
            for b in compositions(tgt.xi_degree, m):
                for g in compositions(src.xi_degree, m):
                    out.append((a, b, d, g))
    return out


def single_term(src: SpaceCtx, tgt: SpaceCtx, key: Key, coeff=1) -> WeylOperator:
    return WeylOperator._raw(src, tgt, {key: Fraction(coeff)})
