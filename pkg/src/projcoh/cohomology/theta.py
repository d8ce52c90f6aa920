"""Connecting map from symbol-level classes of order n to operator classes of order n-1."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..denstensor import SpaceCtx, WeylOperator
from ..exactalg import ZERO
from ..liealg import basis
from ..namedmaps import T_n, gamma_n
from .algebra import gl_index, sl_algebra
from .chi import chi, scalar_polynomial, trace_cochain, unit_cochain
from .complex import Cochain, ce_coboundary
from .modules import OperatorModule, VFieldModule


class ProportionalityError(ValueError):
    """The computed coboundary is not a multiple of the expected class."""


@dataclass(frozen=True)
class ThetaResult:
    m: int
    q: int
    n: int
    t: int
    delta: Fraction
    scalar: Fraction
    expected: Fraction


def theta_expected(m: int, q: int, n: int, delta, t: int) -> Fraction:
    """(-1)^(t+1) n [(m+1) delta - (2q + n + m)]."""
    return (-1) ** (t + 1) * n * ((m + 1) * Fraction(delta) - (2 * q + n + m))


def _gl_sl_index(m: int, i: int, j: int) -> int:
    return m + gl_index(m, i, j)


def _alpha_sl_index(m: int, k: int) -> int:
    return m + m * m + k


def theta_check(m: int, q: int, n: int, delta, t: int) -> ThetaResult:
    """Lift gamma (1 for t = 0, trace for t = 1) to c = chi(gamma) T_n, take its coboundary,
    and read the multiple of gamma(A)(alpha D_xi) T_(n-1) at x = 0."""
    if n <= 0:
        raise ValueError("n must be positive")
    if t not in (0, 1):
        raise ValueError("t must be 0 or 1")
    delta = Fraction(delta)
    src = SpaceCtx(m, delta, q + n)
    module = OperatorModule(src, SpaceCtx(m, delta, q), n)
    gamma = unit_cochain(m) if t == 0 else trace_cochain(m)
    V = gamma.module.rep.V
    scal = chi(gamma, 0, V, VFieldModule(m, V))
    T = T_n(n, src)
    sl = sl_algebra(m)
    values = {}
    for I in scal.values:
        values[I] = T.left_multiply(scalar_polynomial(scal, I)).terms
    c = Cochain(t, sl, module, values)
    dc = ce_coboundary(c)
    for vec in dc.values.values():
        if module.to_element(vec).order() > n - 1:
            raise ProportionalityError("coboundary does not drop the order")
    B = basis(m)
    scalar = None
    gl_pairs = [(i, j) for i in range(m) for j in range(m)] if t == 1 else [None]
    for ij in gl_pairs:
        gA = _gamma_value(ij)
        for k in range(m):
            idx = (_alpha_sl_index(m, k),) if ij is None else (_gl_sl_index(m, *ij), _alpha_sl_index(m, k))
            val = dc.evaluate(idx)
            at0 = WeylOperator(module.src, module.tgt,
                               {key: v for key, v in val.items() if not any(key[0])})
            ref = gamma_n(n, B[_alpha_sl_index(m, k)], src)
            if gA == 0:
                if at0:
                    raise ProportionalityError(f"non-zero value on a trace-free direction {ij}")
                continue
            if not ref:
                raise ProportionalityError("reference operator vanishes")
            k0 = next(iter(ref.terms))
            r = at0.terms.get(k0, ZERO) / ref.terms[k0] / gA
            if at0 != ref.scale(r * gA):
                raise ProportionalityError("value at x = 0 is not proportional to the expected class")
            if scalar is not None and r != scalar:
                raise ProportionalityError("inconsistent scalars across directions")
            scalar = r
    return ThetaResult(m, q, n, t, delta, scalar, theta_expected(m, q, n, delta, t))


def _gamma_value(ij) -> int:
    """gamma(A) for gamma in {1, trace}: 1 for t = 0, tr(E_ij) for t = 1."""
    if ij is None:
        return 1
    return 1 if ij[0] == ij[1] else 0
