"""Dynamic longest increasing subsequence with insert-anywhere and delete."""

from .levels import CostCounters, Element, LevelSet, PreconditionViolated
from .oracle import oracle_is_valid_lis, oracle_length_fast, oracle_levels
from .structure import DuplicateIndex, DynLis, IndexNotFound, InvariantError, NotAnAppend, Violation

__all__ = [
    "CostCounters",
    "DuplicateIndex",
    "DynLis",
    "Element",
    "IndexNotFound",
    "InvariantError",
    "LevelSet",
    "NotAnAppend",
    "PreconditionViolated",
    "Violation",
    "oracle_is_valid_lis",
    "oracle_length_fast",
    "oracle_levels",
]
