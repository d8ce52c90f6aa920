"""Chevalley-Eilenberg cochains, coboundary, contraction, Lie derivative and Betti numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..exactalg import ZERO, QMatrix, _reduce_row, echelon, fmt_rational, mat_rank_kernel, rank
from .algebra import LieAlgebraData, sl_algebra
from .modules import wedge_sort


def _acc(out: dict, key, v) -> None:
    if not v:
        return
    nv = out.get(key, ZERO) + v
    if nv:
        out[key] = nv
    else:
        out.pop(key, None)


def _vec_add(out: dict, vec: dict, scale) -> None:
    for k, v in vec.items():
        _acc(out, k, v * scale)


@dataclass
class Cochain:
    """An s-cochain: increasing index tuples -> sparse module vectors."""

    degree: int
    algebra: LieAlgebraData
    module: object
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for I, vec in self.values.items():
            I = tuple(I)
            if len(I) != self.degree or list(I) != sorted(set(I)):
                raise ValueError(f"index tuple {I} is not increasing of length {self.degree}")
            vec = {k: Fraction(v) for k, v in vec.items() if v}
            if vec:
                clean[I] = vec
        self.values = clean

    def evaluate(self, idx: Sequence[int]) -> dict:
        """Value on an arbitrary tuple of basis indices (alternating)."""
        sign, I = wedge_sort(idx)
        if not sign:
            return {}
        vec = self.values.get(I, {})
        return {k: v * sign for k, v in vec.items()} if sign != 1 else dict(vec)

    def __add__(self, other: Cochain) -> Cochain:
        self._compatible(other)
        vals = {I: dict(v) for I, v in self.values.items()}
        for I, vec in other.values.items():
            _vec_add(vals.setdefault(I, {}), vec, 1)
        return Cochain(self.degree, self.algebra, self.module, vals)

    def scale(self, c) -> Cochain:
        c = Fraction(c)
        return Cochain(self.degree, self.algebra, self.module,
                       {I: {k: v * c for k, v in vec.items()} for I, vec in self.values.items()})

    def __sub__(self, other: Cochain) -> Cochain:
        return self + other.scale(-1)

    def _compatible(self, other: Cochain) -> None:
        if self.degree != other.degree or self.algebra != other.algebra or self.module is not other.module:
            raise ValueError("cochains live in different complexes")

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.degree, self.algebra) == (other.degree, other.algebra) and self.values == other.values

    def flat(self) -> dict:
        return {(I, k): v for I, vec in self.values.items() for k, v in vec.items()}

    @classmethod
    def from_flat(cls, degree, algebra, module, flat: dict) -> Cochain:
        vals: dict = {}
        for (I, k), v in flat.items():
            vals.setdefault(I, {})[k] = v
        return cls(degree, algebra, module, vals)


def _coords(algebra: LieAlgebraData, X) -> dict:
    """Sparse coordinates of X (basis index, coordinate sequence, or SlElement)."""
    if isinstance(X, int):
        return {X: Fraction(1)}
    if hasattr(X, "coords"):
        X = X.coords()
    if len(X) != algebra.dim:
        raise ValueError("element has the wrong number of coordinates")
    return {i: Fraction(c) for i, c in enumerate(X) if c}


def act_vec(module, X: dict, vec: dict) -> dict:
    out: dict = {}
    for i, xi in X.items():
        for k, v in vec.items():
            _vec_add(out, module.act(i, k), xi * v)
    return out


def coboundary_of_basis(algebra: LieAlgebraData, module, I: tuple, key) -> dict:
    """d(e^I (x) v) as {(J, key'): coeff}."""
    out: dict = {}
    for j in range(algebra.dim):
        if j in I:
            continue
        sign, J = wedge_sort((j,) + I)
        for k2, v in module.act(j, key).items():
            _acc(out, (J, k2), sign * v)
    for r, ir in enumerate(I):
        pre, post = I[:r], I[r + 1:]
        for a, b, c in algebra.d_dual(ir):
            sign, J = wedge_sort(pre + (a, b) + post)
            if sign:
                _acc(out, (J, key), (-1) ** r * sign * c)
    return out


def ce_coboundary(c: Cochain) -> Cochain:
    out: dict = {}
    for I, vec in c.values.items():
        for k, v in vec.items():
            _vec_add(out, coboundary_of_basis(c.algebra, c.module, I, k), v)
    return Cochain.from_flat(c.degree + 1, c.algebra, c.module, out)


def ce_contract(X, c: Cochain) -> Cochain:
    """(i_X c)(X_1, ...) = c(X, X_1, ...)."""
    if c.degree == 0:
        raise ValueError("cannot contract a 0-cochain")
    xc = _coords(c.algebra, X)
    out: dict = {}
    for I, vec in c.values.items():
        for pos, i in enumerate(I):
            if i in xc:
                J = I[:pos] + I[pos + 1:]
                _vec_add(out.setdefault(J, {}), vec, xc[i] * (-1) ** pos)
    return Cochain(c.degree - 1, c.algebra, c.module, out)


def ce_lie(X, c: Cochain) -> Cochain:
    """(L_X c)(X_0..X_(s-1)) = X.c(X_0..) - sum_i c(.., [X, X_i], ..)."""
    alg = c.algebra
    xc = _coords(alg, X)
    out: dict = {}
    for J in combinations(range(alg.dim), c.degree):
        val = act_vec(c.module, xc, c.evaluate(J))
        for pos, j in enumerate(J):
            br: dict = {}
            for i, xi in xc.items():
                _vec_add(br, alg.bracket_coeffs(i, j), xi)
            for l, coef in br.items():
                _vec_add(val, c.evaluate(J[:pos] + (l,) + J[pos + 1:]), -coef)
        if val:
            out[J] = val
    return Cochain(c.degree, alg, c.module, out)


# ---------------------------------------------------------------------------
# bases and matrices


def weight_zero_basis(s: int, module, algebra: LieAlgebraData | None = None) -> list[tuple]:
    """(I, key) pairs spanning the weight-zero s-cochains (value weight = sum of ad-eigenvalues)."""
    algebra = algebra or sl_algebra(module.m)
    out = []
    for I in combinations(range(algebra.dim), s):
        w = sum((algebra.eig[i] for i in I), Fraction(0))
        for k in module.keys_of_weight(w):
            out.append((I, k))
    return out


def bounded_basis(s: int, module, N: int, algebra: LieAlgebraData | None = None) -> list[tuple]:
    algebra = algebra or sl_algebra(module.m)
    keys = module.keys_upto(N)
    return [(I, k) for I in combinations(range(algebra.dim), s) for k in keys]


def coboundary_columns(algebra: LieAlgebraData, module, cols: list[tuple]) -> list[dict]:
    return [coboundary_of_basis(algebra, module, I, k) for I, k in cols]


def _rank_of_columns(columns: list[dict]) -> int:
    index: dict = {}
    rows = []
    for col in columns:
        rows.append({index.setdefault(k, len(index)): v for k, v in col.items()})
    return rank(rows)


@dataclass
class BettiReport:
    module: dict
    bounds: dict
    dims: list[int]
    dd_zero: bool
    representatives: list | None = None

    def to_json(self) -> dict:
        out = {"module": self.module, "bounds": self.bounds, "dims": self.dims, "dd_zero": self.dd_zero}
        if self.representatives is not None:
            out["representatives"] = self.representatives
        return out


def _check_dd(algebra, module, cols_s: list[tuple], images: list[dict], next_images: dict) -> bool:
    for img in images:
        total: dict = {}
        for key, v in img.items():
            col = next_images.get(key)
            if col is None:
                col = coboundary_of_basis(algebra, module, *key)
            _vec_add(total, col, v)
        if total:
            return False
    return True


def betti(module, max_degree: int, algebra: LieAlgebraData | None = None, representatives: bool = False,
          bounds: dict | None = None) -> BettiReport:
    """Cohomology dimensions of the weight-zero subcomplex in degrees 0..max_degree."""
    algebra = algebra or sl_algebra(module.m)
    bases = [weight_zero_basis(s, module, algebra) for s in range(max_degree + 2)]
    images = [coboundary_columns(algebra, module, bases[s]) for s in range(max_degree + 1)]
    ranks = [_rank_of_columns(img) for img in images]
    dims = []
    for s in range(max_degree + 1):
        prev = ranks[s - 1] if s > 0 else 0
        dims.append(len(bases[s]) - ranks[s] - prev)
    dd = True
    for s in range(max_degree):
        nxt = dict(zip(bases[s + 1], images[s + 1]))
        dd = dd and _check_dd(algebra, module, bases[s], images[s], nxt)
    reps = None
    if representatives:
        reps = [[_rep_text(r) for r in rr] for rr in _rep_cochains(algebra, module, bases, images, max_degree)]
    b = {"max_degree": max_degree, "weight_reduced": True}
    if bounds:
        b.update(bounds)
    if hasattr(module, "order_cap"):
        b["order_cap"] = module.order_cap
    return BettiReport(module.describe(), b, dims, dd, reps)


def _rep_cochains(algebra, module, bases, images, max_degree) -> list[list[Cochain]]:
    out = []
    for s in range(max_degree + 1):
        basis_s = bases[s]
        cyc = cocycle_basis(basis_s, images[s])
        bnd = images[s - 1] if s > 0 else []
        chosen = _complement(bnd, cyc)
        out.append([Cochain.from_flat(s, algebra, module, v) for v in chosen])
    return out


def _rep_text(c: Cochain) -> str:
    mod = c.module
    parts = []
    for I, vec in sorted(c.values.items()):
        label = ",".join(c.algebra.labels[i] for i in I)
        parts.append(f"[{label}] {mod.serialize(vec)}")
    return "; ".join(parts) or "0"


def cocycle_basis(basis_s: list[tuple], images: list[dict]) -> list[dict]:
    """Kernel of the coboundary restricted to the given basis, as flat cochain dicts."""
    if not basis_s:
        return []
    index: dict = {}
    rows_by_key: dict = {}
    for c, img in enumerate(images):
        for k, v in img.items():
            rows_by_key.setdefault(index.setdefault(k, len(index)), {})[c] = v
    M = QMatrix(len(index), len(basis_s), {(r, c): v for r, row in rows_by_key.items() for c, v in row.items()})
    _, ker = mat_rank_kernel(M)
    return [{basis_s[i]: v for i, v in enumerate(vec) if v} for vec in ker]


def _complement(span: list[dict], candidates: list[dict]) -> list[dict]:
    """Candidates that increase the rank over span, greedily."""
    index: dict = {}

    def conv(vec):
        return {index.setdefault(k, len(index)): v for k, v in vec.items()}

    piv = echelon(conv(v) for v in span)
    out = []
    for cand in candidates:
        r = _reduce_row(conv(cand), piv)
        if r:
            p = min(r)
            c = r[p]
            piv[p] = {k: v / c for k, v in r.items()}
            out.append(cand)
    return out


def class_rank(cocycles: Sequence[Cochain], algebra: LieAlgebraData | None = None) -> int:
    """Dimension of the span of the classes of the given weight-zero cocycles."""
    if not cocycles:
        return 0
    c0 = cocycles[0]
    algebra = algebra or c0.algebra
    module, s = c0.module, c0.degree
    for c in cocycles:
        if not ce_coboundary(c).is_zero():
            raise ValueError("not a cocycle")
        for (I, k) in c.flat():
            w = sum((algebra.eig[i] for i in I), Fraction(0))
            if module.weight(k) != w:
                raise ValueError("cocycle has a component of non-zero weight")
    bnd = coboundary_columns(algebra, module, weight_zero_basis(s - 1, module, algebra)) if s > 0 else []
    return len(_complement(bnd, [c.flat() for c in cocycles]))


def is_coboundary(c: Cochain) -> bool:
    return class_rank([c]) == 0


# ---------------------------------------------------------------------------
# brute force


def betti_oracle(module, max_degree: int, N: int, algebra: LieAlgebraData | None = None) -> BettiReport:
    """Cohomology of the x-degree <= N truncation of the full complex (no weight splitting).

    H^s = dim Z^s - dim B^s with Z^s the cocycles of x-degree <= N and B^s the
    coboundaries of cochains whose coboundary stays within the bound.
    """
    algebra = algebra or sl_algebra(module.m)
    bases = [bounded_basis(s, module, N, algebra) for s in range(max_degree + 1)]
    images = [coboundary_columns(algebra, module, bases[s]) for s in range(max_degree + 1)]
    ranks = [_rank_of_columns(img) for img in images]
    inside = [set(b) for b in bases]
    dd = True
    for s in range(max_degree - 1):
        dd = dd and _check_dd(algebra, module, bases[s], images[s], dict(zip(bases[s + 1], images[s + 1])))
    over = []
    for s in range(max_degree):
        over.append(_rank_of_columns([{k: v for k, v in img.items() if k not in inside[s + 1]}
                                      for img in images[s]]))
    dims = []
    for s in range(max_degree + 1):
        dims.append(len(bases[s]) - ranks[s] - (ranks[s - 1] - over[s - 1] if s > 0 else 0))
    return BettiReport(module.describe(), {"max_degree": max_degree, "xdeg": N, "weight_reduced": False,
                                           **({"order_cap": module.order_cap} if hasattr(module, "order_cap") else {})},
                       dims, dd)


def cochain_from_function(s: int, module, fn, algebra: LieAlgebraData | None = None) -> Cochain:
    """Cochain whose value on each increasing tuple I is fn(I) (a sparse vector)."""
    algebra = algebra or sl_algebra(module.m)
    return Cochain(s, algebra, module, {I: fn(I) for I in combinations(range(algebra.dim), s)})


def fmt_dims(dims: Sequence[int]) -> str:
    return ",".join(str(d) for d in dims)


__all__ = [
    "Cochain", "BettiReport", "act_vec", "betti", "betti_oracle", "class_rank", "ce_coboundary",
    "ce_contract", "ce_lie", "coboundary_of_basis", "cochain_from_function", "cocycle_basis",
    "is_coboundary", "weight_zero_basis", "bounded_basis", "fmt_dims", "fmt_rational",
]
