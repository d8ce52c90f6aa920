"""sl(m+1) realized as R^m + gl(m) + R^m*, and its projective embedding.

Elements are triples ``(h, A, alpha)``.  The standard basis is ordered
``e_1..e_m``, ``E_11, E_12, ..., E_mm`` (row-major), ``eps^1..eps^m``; the
coordinate vector of an element in that basis is simply the concatenation
of ``h``, the rows of ``A`` and ``alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactalg import ONE, ZERO, MultiPoly, QMatrix, mat_rank_kernel, solve_linear


def _fr_tuple(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in v)


@dataclass(frozen=True)
class SlElement:
    h: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        m = len(self.h)
        if m < 1 or len(self.alpha) != m or len(self.A) != m or any(len(r) != m for r in self.A):
            raise ValueError("inconsistent SlElement dimensions")
        object.__setattr__(self, "h", _fr_tuple(self.h))
        object.__setattr__(self, "A", tuple(_fr_tuple(r) for r in self.A))
        object.__setattr__(self, "alpha", _fr_tuple(self.alpha))

    @property
    def m(self) -> int:
        return len(self.h)

    @classmethod
    def zero(cls, m: int) -> SlElement:
        z = (ZERO,) * m
        return cls(z, (z,) * m, z)

    @classmethod
    def make(cls, m: int, h=None, A=None, alpha=None) -> SlElement:
        z = [0] * m
        return cls(tuple(h or z), tuple(tuple(r) for r in (A or [z] * m)), tuple(alpha or z))

    @classmethod
    def from_coords(cls, m: int, coords: Sequence) -> SlElement:
        if len(coords) != m * (m + 2):
            raise ValueError("coordinate vector has wrong length")
        c = list(coords)
        h = c[:m]
        A = [c[m + i * m: m + (i + 1) * m] for i in range(m)]
        alpha = c[m + m * m:]
        return cls(tuple(h), tuple(tuple(r) for r in A), tuple(alpha))

    def coords(self) -> tuple[Fraction, ...]:
        out = list(self.h)
        for r in self.A:
            out.extend(r)
        out.extend(self.alpha)
        return tuple(out)

    def __add__(self, other: SlElement) -> SlElement:
        _same_m(self, other)
        return SlElement.from_coords(self.m, [a + b for a, b in zip(self.coords(), other.coords())])

    def __sub__(self, other: SlElement) -> SlElement:
        return self + other.scale(-1)

    def scale(self, c) -> SlElement:
        c = Fraction(c)
        return SlElement.from_coords(self.m, [c * a for a in self.coords()])

    def __mul__(self, c) -> SlElement:
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords())


def _same_m(X: SlElement, Y: SlElement) -> None:
    if X.m != Y.m:
        raise ValueError(f"dimension mismatch: m={X.m} vs m={Y.m}")


def sl_dim(m: int) -> int:
    return m * (m + 2)


def basis(m: int) -> list[SlElement]:
    n = sl_dim(m)
    out = []
    for i in range(n):
        c = [0] * n
        c[i] = 1
        out.append(SlElement.from_coords(m, c))
    return out


def basis_labels(m: int) -> list[str]:
    labels = [f"h{i + 1}" for i in range(m)]
    labels += [f"A{i + 1}{j + 1}" for i in range(m) for j in range(m)]
    labels += [f"a{i + 1}" for i in range(m)]
    return labels


def bracket(X: SlElement, Y: SlElement) -> SlElement:
    """[h, alpha] = alpha(h) 1 + h (x) alpha; gl acts naturally on R^m and R^m*."""
    _same_m(X, Y)
    m = X.m
    r = range(m)
    hx, Ax, ax = X.h, X.A, X.alpha
    hy, Ay, ay = Y.h, Y.A, Y.alpha
    # h-part: A_X h_Y - A_Y h_X
    h = [sum(Ax[i][j] * hy[j] for j in r) - sum(Ay[i][j] * hx[j] for j in r) for i in r]
    # alpha-part: natural dual action A.alpha = -alpha A
    al = [-sum(ay[i] * Ax[i][j] for i in r) + sum(ax[i] * Ay[i][j] for i in r) for j in r]
    axhy = sum(ax[i] * hy[i] for i in r)
    ayhx = sum(ay[i] * hx[i] for i in r)
    A = []
    for i in r:
        row = []
        for j in r:
            v = sum(Ax[i][k] * Ay[k][j] - Ay[i][k] * Ax[k][j] for k in r)
            # [h_X, alpha_Y] - [h_Y, alpha_X]
            v += hx[i] * ay[j] - hy[i] * ax[j]
            if i == j:
                v += ayhx - axhy
            row.append(v)
        A.append(tuple(row))
    return SlElement(tuple(h), tuple(A), tuple(al))


@lru_cache(maxsize=None)
def structure_constants(m: int) -> dict[tuple[int, int], dict[int, Fraction]]:
    """``(i, j) -> {l: c}`` with [b_i, b_j] = sum_l c b_l, for i < j."""
    B = basis(m)
    out = {}
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            c = bracket(B[i], B[j]).coords()
            d = {l: v for l, v in enumerate(c) if v}
            if d:
                out[(i, j)] = d
    return out


def grading_degree(X: SlElement) -> int:
    """Degree -1, 0, +1 of a homogeneous element (h, gl, alpha parts)."""
    has_h = any(X.h)
    has_A = any(any(r) for r in X.A)
    has_a = any(X.alpha)
    if has_h + has_A + has_a != 1:
        raise ValueError("element is zero or not homogeneous for the grading")
    return -1 if has_h else (0 if has_A else 1)


def basis_degrees(m: int) -> list[int]:
    return [grading_degree(b) for b in basis(m)]


def grading_element(m: int) -> SlElement:
    """The identity matrix of gl(m); its adjoint action is minus the grading degree."""
    return SlElement.make(m, A=[[1 if i == j else 0 for j in range(m)] for i in range(m)])


# ---------------------------------------------------------------------------
# Polynomial vector fields


@dataclass(frozen=True)
class PolyVectorField:
    components: tuple[MultiPoly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("vector field needs at least one component")
        m = comps[0].m
        if len(comps) != m:
            raise ValueError("number of components must equal m")
        for c in comps:
            if c.m != m or any(sum(k[m:]) for k in c.terms):
                raise ValueError("vector field components must be x-polynomials")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> MultiPoly:
        return self.components[i]

    def apply(self, f: MultiPoly) -> MultiPoly:
        """X.f = X^j d_j f (x-derivatives only)."""
        out = MultiPoly.zero(self.m)
        for j, Xj in enumerate(self.components):
            if Xj:
                out = out + Xj * f.dx(j + 1)
        return out

    def divergence(self) -> MultiPoly:
        out = MultiPoly.zero(self.m)
        for i, Xi in enumerate(self.components):
            out = out + Xi.dx(i + 1)
        return out

    def jacobian(self) -> list[list[MultiPoly]]:
        """``J[i][j] = d_j X^i``."""
        return [[Xi.dx(j + 1) for j in range(self.m)] for Xi in self.components]

    def __add__(self, other: PolyVectorField) -> PolyVectorField:
        return PolyVectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: PolyVectorField) -> PolyVectorField:
        return PolyVectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> PolyVectorField:
        return PolyVectorField(tuple(a * c for a in self.components))

    def max_x_degree(self) -> int:
        return max(c.x_degree() for c in self.components)


def vf_bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """Standard bracket [X, Y]^i = X.Y^i - Y.X^i."""
    if X.m != Y.m:
        raise ValueError("dimension mismatch")
    return PolyVectorField(tuple(X.apply(Y[i]) - Y.apply(X[i]) for i in range(X.m)))


def embed(X: SlElement) -> PolyVectorField:
    """h* = -h^i d_i,  A* = -A^i_j x^j d_i,  alpha* = alpha(x) x^i d_i."""
    m = X.m
    xs = [MultiPoly.x(m, i + 1) for i in range(m)]
    alpha_x = MultiPoly.zero(m)
    for i in range(m):
        if X.alpha[i]:
            alpha_x = alpha_x + xs[i] * X.alpha[i]
    comps = []
    for i in range(m):
        c = MultiPoly.const(m, -X.h[i])
        for j in range(m):
            if X.A[i][j]:
                c = c - xs[j] * X.A[i][j]
        c = c + alpha_x * xs[i]
        comps.append(c)
    return PolyVectorField(tuple(comps))


@lru_cache(maxsize=None)
def embedded_basis(m: int) -> tuple[PolyVectorField, ...]:
    return tuple(embed(b) for b in basis(m))


# ---------------------------------------------------------------------------
# Killing form


def matrix_rep(X: SlElement) -> list[list[Fraction]]:
    """Faithful (m+1)x(m+1) traceless realization compatible with :func:`bracket`."""
    m = X.m
    tr = sum(X.A[i][i] for i in range(m))
    shift = tr / (m + 1)
    M = [[ZERO] * (m + 1) for _ in range(m + 1)]
    for i in range(m):
        for j in range(m):
            M[i][j] = X.A[i][j]
        M[i][i] -= shift
        M[i][m] = X.h[i]
        M[m][i] = X.alpha[i]
    M[m][m] = -shift
    return M


def killing(X: SlElement, Y: SlElement) -> Fraction:
    """K(X, Y) = 2(m+1) tr(rho(X) rho(Y))."""
    _same_m(X, Y)
    n = X.m + 1
    P, Q = matrix_rep(X), matrix_rep(Y)
    return 2 * n * sum(P[i][k] * Q[k][i] for i in range(n) for k in range(n))


def killing_via_ad(X: SlElement, Y: SlElement) -> Fraction:
    """tr(ad X ad Y) from the bracket; used to cross-check :func:`killing`."""
    m = X.m
    B = basis(m)
    total = ZERO
    for k, b in enumerate(B):
        total += bracket(X, bracket(Y, b)).coords()[k]
    return total


def dual_basis(B: Sequence[SlElement]) -> list[SlElement]:
    """Return Y_j with K(B_i, Y_j) = delta_ij."""
    if not B:
        raise ValueError("empty basis")
    m = B[0].m
    n = sl_dim(m)
    if len(B) != n:
        raise ValueError(f"expected {n} basis elements, got {len(B)}")
    E = basis(m)
    # G[i][k] = K(B_i, E_k); Y_j = sum_k y_jk E_k with G y_j = e_j
    G = QMatrix.from_dense([[killing(b, e) for e in E] for b in B])
    rk, _ = mat_rank_kernel(G)
    if rk != n:
        raise ValueError("singular Gram matrix: the family is not a basis")
    out = []
    for j in range(n):
        rhs = [ONE if i == j else ZERO for i in range(n)]
        sol = solve_linear(G, rhs)
        out.append(SlElement.from_coords(m, sol[0]))
    return out
