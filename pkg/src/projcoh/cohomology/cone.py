"""Finite cochain complexes over Q and the mapping cone of a chain map."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactalg import QMatrix, mat_rank_kernel, rank


@dataclass
class FiniteComplex:
    """Spaces Q^dims[i] with differentials d[i] : C^i -> C^(i+1) (len(d) = len(dims) - 1)."""

    dims: list[int]
    d: list[QMatrix]

    def __post_init__(self):
        if len(self.d) != len(self.dims) - 1:
            raise ValueError("need one differential between consecutive degrees")
        for i, M in enumerate(self.d):
            if (M.rows, M.cols) != (self.dims[i + 1], self.dims[i]):
                raise ValueError(f"differential {i} has the wrong shape")
        for i in range(len(self.d) - 1):
            if not (self.d[i + 1] @ self.d[i]).is_zero():
                raise ValueError(f"d{i + 1} d{i} != 0")

    def diff(self, i: int) -> QMatrix:
        if 0 <= i < len(self.d):
            return self.d[i]
        rows = self.dims[i + 1] if 0 <= i + 1 < len(self.dims) else 0
        cols = self.dims[i] if 0 <= i < len(self.dims) else 0
        return QMatrix(rows, cols)

    def betti(self) -> list[int]:
        return [self.dims[i] - rank(self.diff(i).row_dicts()) - rank(self.diff(i - 1).row_dicts())
                for i in range(len(self.dims))]


class ChainMapError(ValueError):
    """The supplied maps do not commute with the differentials."""


def _block(rows: int, cols: int, blocks: list[tuple[int, int, QMatrix]]) -> QMatrix:
    entries = {}
    for r0, c0, M in blocks:
        for (r, c), v in M.entries.items():
            entries[(r0 + r, c0 + c)] = v
    return QMatrix(rows, cols, entries)


def check_chain_map(A: FiniteComplex, B: FiniteComplex, phi: Sequence[QMatrix]) -> bool:
    for i in range(len(A.dims) - 1):
        if (phi[i + 1] @ A.diff(i)) != (B.diff(i) @ phi[i]):
            return False
    return True


def cone(A: FiniteComplex, B: FiniteComplex, phi: Sequence[QMatrix]) -> FiniteComplex:
    """C^i = A^i + B^(i-1), d(a, b) = (d a, phi(a) - d b)."""
    if len(A.dims) != len(B.dims) or len(phi) != len(A.dims):
        raise ValueError("complexes must have the same length, with one map per degree")
    if not check_chain_map(A, B, phi):
        raise ChainMapError("phi is not a chain map")
    n = len(A.dims)
    dims = [(A.dims[i] if i < n else 0) + (B.dims[i - 1] if i > 0 else 0) for i in range(n + 1)]
    ds = []
    for i in range(n):
        a_i = A.dims[i]
        a_n = A.dims[i + 1] if i + 1 < n else 0
        blocks = []
        if i + 1 < n:
            blocks.append((0, 0, A.diff(i)))
        blocks.append((a_n, 0, phi[i]))
        if i > 0:
            blocks.append((a_n, a_i, _neg(B.diff(i - 1))))
        ds.append(_block(dims[i + 1], dims[i], blocks))
    return FiniteComplex(dims, ds)


def _neg(M: QMatrix) -> QMatrix:
    return QMatrix(M.rows, M.cols, {k: -v for k, v in M.entries.items()})


def induced_rank(A: FiniteComplex, B: FiniteComplex, phi: Sequence[QMatrix], i: int) -> int:
    """Rank of phi_# : H^i(A) -> H^i(B)."""
    _, zA = mat_rank_kernel(A.diff(i))
    imgs = [phi[i].matvec(z) for z in zA]
    Bb = B.diff(i - 1).transpose().row_dicts()  # columns of d_(i-1) as rows
    base = rank(Bb)
    both = rank(Bb + [{j: v for j, v in enumerate(vec) if v} for vec in imgs])
    return both - base


def cone_identity(A: FiniteComplex, B: FiniteComplex, phi: Sequence[QMatrix]) -> tuple[list[int], list[int]]:
    """(Betti of the cone, ker phi_# + coker phi_# of the previous degree) degree-wise."""
    C = cone(A, B, phi)
    bA, bB = A.betti(), B.betti()
    n = len(A.dims)
    ranks = [induced_rank(A, B, phi, i) for i in range(n)]
    pred = []
    for i in range(n + 1):
        ker = bA[i] - ranks[i] if i < n else 0
        cok = bB[i - 1] - ranks[i - 1] if i > 0 else 0
        pred.append(ker + cok)
    return C.betti(), pred


# ---------------------------------------------------------------------------
# random data


def _rand_matrix(rng: random.Random, rows: int, cols: int, lo=-2, hi=2) -> QMatrix:
    return QMatrix.from_dense([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]) if rows and cols \
        else QMatrix(rows, cols)


def random_complex(rng: random.Random, length: int = 4, max_dim: int = 4) -> FiniteComplex:
    dims = [rng.randint(0, max_dim) for _ in range(length)]
    ds: list[QMatrix] = []
    for i in range(length - 1):
        if i == 0:
            ds.append(_rand_matrix(rng, dims[1], dims[0]))
            continue
        prev = ds[-1]
        # rows of the new map must annihilate the image of prev
        _, left = mat_rank_kernel(prev.transpose())
        k = len(left)
        R = _rand_matrix(rng, dims[i + 1], k)
        L = QMatrix.from_dense(left) if k else QMatrix(0, dims[i])
        ds.append(R @ L if k else QMatrix(dims[i + 1], dims[i]))
    return FiniteComplex(dims, ds)


def random_chain_map(rng: random.Random, A: FiniteComplex, B: FiniteComplex) -> list[QMatrix]:
    """Random element of the space of chain maps A -> B."""
    n = len(A.dims)
    offs = []
    total = 0
    for i in range(n):
        offs.append(total)
        total += B.dims[i] * A.dims[i]

    def var(i, r, c):
        return offs[i] + r * A.dims[i] + c

    rows = []
    for i in range(n - 1):
        dA, dB = A.diff(i), B.diff(i)
        # (phi_(i+1) dA - dB phi_i)[r][c] = 0
        for r in range(B.dims[i + 1]):
            for c in range(A.dims[i]):
                row: dict = {}
                for k in range(A.dims[i + 1]):
                    v = dA.entries.get((k, c))
                    if v:
                        row[var(i + 1, r, k)] = row.get(var(i + 1, r, k), 0) + v
                for k in range(B.dims[i]):
                    v = dB.entries.get((r, k))
                    if v:
                        row[var(i, k, c)] = row.get(var(i, k, c), 0) - v
                row = {k: Fraction(v) for k, v in row.items() if v}
                if row:
                    rows.append(row)
    M = QMatrix(len(rows), total, {(ri, c): v for ri, row in enumerate(rows) for c, v in row.items()})
    _, ker = mat_rank_kernel(M) if total else (0, [])
    vec = [Fraction(0)] * total
    for kv in ker:
        w = rng.randint(-2, 2)
        for j in range(total):
            vec[j] += w * kv[j]
    out = []
    for i in range(n):
        out.append(QMatrix(B.dims[i], A.dims[i], {(r, c): vec[var(i, r, c)]
                                                  for r in range(B.dims[i]) for c in range(A.dims[i])
                                                  if vec[var(i, r, c)]}))
    return out
