"""Realizability of branched covers of surfaces with prescribed branch data."""

from .decide import decide, match_euclidean_family
from .euler import induced_orbifold_cover, validate_candidate
from .model import (
    CandidateCover,
    Decision,
    Orbifold,
    Partition,
    Verdict,
    format_candidate,
    parse_candidate,
    parse_orbifold,
)

__all__ = [
    "CandidateCover",
    "Decision",
    "Orbifold",
    "Partition",
    "Verdict",
    "decide",
    "format_candidate",
    "induced_orbifold_cover",
    "match_euclidean_family",
    "parse_candidate",
    "parse_orbifold",
    "validate_candidate",
]
