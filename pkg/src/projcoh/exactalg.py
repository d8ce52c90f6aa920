"""Exact rational arithmetic, polynomials in (x, xi) and sparse linear algebra.

Every scalar in the package is a :class:`fractions.Fraction`; there is no
floating point path anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"-3"`` or ``"0.25"`` exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def fmt_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All exponent vectors of length ``parts`` summing to ``total``, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def exponents_upto(max_total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for total in range(max_total + 1):
        yield from compositions(total, parts)


def falling(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1)."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def multi_factorial(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        for i in range(2, a + 1):
            out *= i
    return out


class MultiPoly:
    """Polynomial in ``x_1..x_m`` and ``xi_1..xi_m`` with rational coefficients.

    Terms are keyed by exponent vectors of length ``2m`` (x-block first).
    Zero coefficients are never stored.
    """

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        if m < 1:
            raise ValueError("dimension m must be >= 1")
        self.m = m
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != 2 * m or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for m={m}")
                c = Fraction(c)
                if c:
                    clean[exps] = clean.get(exps, ZERO) + c
                    if not clean[exps]:
                        del clean[exps]
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, m: int) -> MultiPoly:
        return cls(m)

    @classmethod
    def const(cls, m: int, c) -> MultiPoly:
        return cls(m, {(0,) * (2 * m): Fraction(c)})

    @classmethod
    def x(cls, m: int, i: int) -> MultiPoly:
        """The coordinate x_i, 1-based."""
        if not 1 <= i <= m:
            raise IndexError(f"variable index {i} out of range 1..{m}")
        e = [0] * (2 * m)
        e[i - 1] = 1
        return cls(m, {tuple(e): ONE})

    @classmethod
    def xi(cls, m: int, i: int) -> MultiPoly:
        if not 1 <= i <= m:
            raise IndexError(f"variable index {i} out of range 1..{m}")
        e = [0] * (2 * m)
        e[m + i - 1] = 1
        return cls(m, {tuple(e): ONE})

    @classmethod
    def monomial(cls, a: Sequence[int], b: Sequence[int] | None = None, coeff=1) -> MultiPoly:
        m = len(a)
        b = tuple(b) if b is not None else (0,) * m
        return cls(m, {tuple(a) + b: Fraction(coeff)})

    # arithmetic ---------------------------------------------------------
    def _check(self, other: MultiPoly) -> None:
        if self.m != other.m:
            raise ValueError(f"dimension mismatch: {self.m} vs {other.m}")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.m, other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, ZERO) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return MultiPoly._raw(self.m, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.m, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            if not c:
                return MultiPoly(self.m)
            return MultiPoly._raw(self.m, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                nv = out.get(k, ZERO) + v1 * v2
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return MultiPoly._raw(self.m, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        out = MultiPoly.const(self.m, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(self.m, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.m, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    @classmethod
    def _raw(cls, m: int, terms: dict) -> MultiPoly:
        obj = cls.__new__(cls)
        obj.m = m
        obj.terms = terms
        return obj

    # calculus -----------------------------------------------------------
    def partial(self, block: str, index: int) -> MultiPoly:
        """Formal derivative in ``x_index`` (block 'x') or ``xi_index`` (block 'xi')."""
        if not 1 <= index <= self.m:
            raise IndexError(f"variable index {index} out of range 1..{self.m}")
        if block == "x":
            pos = index - 1
        elif block in ("xi", "ξ"):
            pos = self.m + index - 1
        else:
            raise ValueError(f"unknown variable block {block!r}")
        out = {}
        for k, v in self.terms.items():
            e = k[pos]
            if e:
                nk = k[:pos] + (e - 1,) + k[pos + 1:]
                out[nk] = v * e
        return MultiPoly._raw(self.m, out)

    def dx(self, i: int) -> MultiPoly:
        return self.partial("x", i)

    def dxi(self, i: int) -> MultiPoly:
        return self.partial("xi", i)

    def evaluate_x(self, point: Sequence) -> MultiPoly:
        """Substitute x = point, leaving the xi-block symbolic."""
        m = self.m
        out: dict = {}
        for k, v in self.terms.items():
            c = v
            for e, p in zip(k[:m], point):
                c *= Fraction(p) ** e
            if c:
                nk = (0,) * m + k[m:]
                out[nk] = out.get(nk, ZERO) + c
        return MultiPoly(m, out)

    # inspection ---------------------------------------------------------
    def x_degree(self) -> int:
        return max((sum(k[: self.m]) for k in self.terms), default=-1)

    def xi_degrees(self) -> set[int]:
        return {sum(k[self.m:]) for k in self.terms}

    def is_xi_homogeneous(self, p: int) -> bool:
        return all(sum(k[self.m:]) == p for k in self.terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), ZERO)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items())

    def __iter__(self):
        return iter(self.sorted_terms())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        m = self.m
        parts = []
        for k, v in self.sorted_terms():
            factors = []
            for i, e in enumerate(k):
                name = f"x{i + 1}" if i < m else f"xi{i - m + 1}"
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(fmt_rational(v))
            elif v == 1:
                parts.append(mono)
            else:
                parts.append(f"{fmt_rational(v)}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


class QMatrix:
    """Sparse rational matrix with ``(row, col) -> Fraction`` storage."""

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], Fraction] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                self.entries[(r, c)] = v

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> QMatrix:
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(n, n, {(i, i): ONE for i in range(n)})

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def to_dense(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> QMatrix:
        return QMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def matvec(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            if vec[c]:
                out[r] += v * vec[c]
        return out

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), ZERO) + v * w
        return QMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)


def _reduce_row(r: dict[int, Fraction], pivots: dict[int, dict[int, Fraction]]) -> dict[int, Fraction]:
    while r:
        c = min(r)
        p = pivots.get(c)
        if p is None:
            return r
        f = r[c]
        for k, v in p.items():
            nv = r.get(k, ZERO) - f * v
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)
    return r


def echelon(rows: Iterable[Mapping[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    """Row echelon form: maps each pivot column to a row with pivot entry 1."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        r = _reduce_row(r, pivots)
        if r:
            c = min(r)
            inv = 1 / r[c]
            pivots[c] = {k: v * inv for k, v in r.items()}
    return pivots


def reduced_echelon(rows: Iterable[Mapping[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    pivots = echelon(rows)
    for c in sorted(pivots, reverse=True):
        r = pivots[c]
        for c2 in sorted(k for k in r if k != c and k in pivots):
            f = r.get(c2)
            if not f:
                continue
            for k, v in pivots[c2].items():
                nv = r.get(k, ZERO) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return pivots


def rank(M: QMatrix | Iterable[Mapping[int, Fraction]]) -> int:
    rows = M.row_dicts() if isinstance(M, QMatrix) else M
    return len(echelon(rows))


def _kernel_from_rref(pivots: dict[int, dict[int, Fraction]], cols: int) -> list[list[Fraction]]:
    kernel = []
    for f in range(cols):
        if f in pivots:
            continue
        v = [ZERO] * cols
        v[f] = ONE
        for c, r in pivots.items():
            coef = r.get(f)
            if coef:
                v[c] = -coef
        kernel.append(v)
    return kernel


def mat_rank_kernel(M: QMatrix) -> tuple[int, list[list[Fraction]]]:
    """Exact rank and a basis of the right kernel of ``M``."""
    pivots = reduced_echelon(M.row_dicts())
    return len(pivots), _kernel_from_rref(pivots, M.cols)


class NoSolution:
    """Marker returned by :func:`solve_linear` for an inconsistent system."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NO_SOLUTION"

    def __bool__(self) -> bool:
        return False


NO_SOLUTION = NoSolution()


def solve_linear(M: QMatrix, b: Sequence) -> tuple[list[Fraction], list[list[Fraction]]] | NoSolution:
    """Solve ``M x = b`` exactly.

    Returns ``(particular, kernel_basis)`` or :data:`NO_SOLUTION`.
    """
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.rows}")
    aug = M.cols
    rows = M.row_dicts()
    for i, v in enumerate(b):
        v = Fraction(v)
        if v:
            rows[i][aug] = v
    pivots = reduced_echelon(rows)
    if aug in pivots:
        return NO_SOLUTION
    xp = [ZERO] * M.cols
    for c, r in pivots.items():
        xp[c] = r.get(aug, ZERO)
    kernel = _kernel_from_rref({c: {k: v for k, v in r.items() if k != aug} for c, r in pivots.items()}, M.cols)
    return xp, kernel


def in_span(vectors: Sequence[Mapping[int, Fraction]], target: Mapping[int, Fraction]) -> bool:
    base = rank(list(vectors))
    return rank(list(vectors) + [target]) == base


__all__ = [
    "Rational", "ZERO", "ONE", "parse_rational", "fmt_rational", "compositions",
    "exponents_upto", "falling", "multi_factorial", "MultiPoly", "QMatrix", "echelon",
    "reduced_echelon", "rank", "mat_rank_kernel", "solve_linear", "NO_SOLUTION",
    "NoSolution", "in_span",
]
