"""Chevalley-Eilenberg cohomology of sl(m+1) and gl(m) with exact arithmetic."""

from .algebra import LieAlgebraData, gl_algebra, sl_algebra
from .chi import chi, finite_ce, gl_cochain, glinv_dims, trace_cochain, unit_cochain
from .complex import (
    BettiReport,
    Cochain,
    betti,
    betti_oracle,
    ce_coboundary,
    ce_contract,
    ce_lie,
    class_rank,
    cochain_from_function,
    is_coboundary,
    weight_zero_basis,
)
from .cone import FiniteComplex, cone, cone_identity, random_chain_map, random_complex
from .modules import FieldModule, FiniteModule, FiniteRep, OperatorModule, VFieldModule
from .theta import ThetaResult, theta_check, theta_expected

__all__ = [
    "BettiReport", "Cochain", "FieldModule", "FiniteComplex", "FiniteModule", "FiniteRep",
    "LieAlgebraData", "OperatorModule", "ThetaResult", "VFieldModule", "betti", "betti_oracle",
    "ce_coboundary", "ce_contract", "ce_lie", "chi", "class_rank", "cochain_from_function", "cone",
    "cone_identity", "finite_ce", "gl_algebra", "gl_cochain", "glinv_dims", "is_coboundary",
    "random_chain_map", "random_complex", "sl_algebra", "theta_check", "theta_expected",
    "trace_cochain", "unit_cochain", "weight_zero_basis",
]
