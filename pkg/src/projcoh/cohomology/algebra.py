"""Structure-constant descriptions of sl(m+1) and gl(m) for the cochain engine."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..liealg import basis_degrees, basis_labels, sl_dim, structure_constants


@dataclass(frozen=True)
class LieAlgebraData:
    name: str
    dim: int
    consts: dict  # (i, j) with i < j -> {l: c}
    eig: tuple  # ad-eigenvalue of the grading element on each basis vector
    labels: tuple

    def bracket_coeffs(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self.consts.get((i, j), {})
        return {l: -c for l, c in self.consts.get((j, i), {}).items()}

    @lru_cache(maxsize=None)
    def d_dual(self, k: int) -> tuple:
        """d e^k = sum (a, b, c) c e^a ^ e^b over a < b."""
        out = []
        for (a, b), row in self.consts.items():
            c = row.get(k)
            if c:
                out.append((a, b, -c))
        return tuple(out)

    def __hash__(self) -> int:
        return hash((self.name, self.dim))

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebraData) and (self.name, self.dim) == (other.name, other.dim)


@lru_cache(maxsize=None)
def sl_algebra(m: int) -> LieAlgebraData:
    eig = tuple(Fraction(-d) for d in basis_degrees(m))
    return LieAlgebraData(f"sl{m + 1}", sl_dim(m), structure_constants(m), eig, tuple(basis_labels(m)))


def gl_index(m: int, i: int, j: int) -> int:
    return i * m + j


@lru_cache(maxsize=None)
def gl_algebra(m: int) -> LieAlgebraData:
    """gl(m) on E_ij (row-major); [E_ij, E_kl] = d_jk E_il - d_li E_kj."""
    n = m * m
    consts: dict = {}
    idx = [(i, j) for i in range(m) for j in range(m)]
    for x in range(n):
        for y in range(x + 1, n):
            (i, j), (k, l) = idx[x], idx[y]
            row: dict = {}
            if j == k:
                row[gl_index(m, i, l)] = row.get(gl_index(m, i, l), 0) + 1
            if l == i:
                row[gl_index(m, k, j)] = row.get(gl_index(m, k, j), 0) - 1
            row = {a: Fraction(c) for a, c in row.items() if c}
            if row:
                consts[(x, y)] = row
    labels = tuple(f"E{i + 1}{j + 1}" for i in range(m) for j in range(m))
    return LieAlgebraData(f"gl{m}", n, consts, (Fraction(0),) * n, labels)
