"""Entanglement-breaking subspaces: certification, constructions, EOF and additivity.

Subpackages are imported lazily by the user; the names below are the most
common entry points.
"""

from ._kernels import BACKEND
from .certify import EBStatus, EBVerdict, Family3Params, certify, family3_inequality, numeric_falsify
from .construct import fixtures
from .eof import additivity_check, convex_roof_eof, entanglement_cost, entanglement_entropy, wootters_eof
from .separability import is_ppt, is_separable_exact
from .states import BipartiteSubspace, DensityOperator, ProbeState, PureState

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BipartiteSubspace",
    "DensityOperator",
    "EBStatus",
    "EBVerdict",
    "Family3Params",
    "ProbeState",
    "PureState",
    "additivity_check",
    "certify",
    "convex_roof_eof",
    "entanglement_cost",
    "entanglement_entropy",
    "family3_inequality",
    "fixtures",
    "is_ppt",
    "is_separable_exact",
    "numeric_falsify",
    "wootters_eof",
]
