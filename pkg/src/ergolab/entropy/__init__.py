"""Topological entropy estimates and separated families."""

from .family import (
    FamilyModel,
    PairCase,
    SeparatedFamily,
    SeparationResult,
    build_separated_family,
    family_cardinality_check,
    family_from_model,
    family_targets,
    family_to_model,
    first_difference,
    four_point_selector,
    lemma_case,
    orbit_gap,
    separation_horizon,
    staggered_padding,
    verify_family_members,
    verify_pairwise_separation,
)
from .separated import (
    EntropyEstimate,
    SeparatedSet,
    check_separated,
    count_laps,
    count_words,
    entropy_estimate,
    fit_slope,
    is_separated,
    lap_counts,
    max_separated,
)

__all__ = [
    "EntropyEstimate",
    "FamilyModel",
    "PairCase",
    "SeparatedFamily",
    "SeparatedSet",
    "SeparationResult",
    "build_separated_family",
    "check_separated",
    "count_laps",
    "count_words",
    "entropy_estimate",
    "family_cardinality_check",
    "family_from_model",
    "family_targets",
    "family_to_model",
    "first_difference",
    "fit_slope",
    "four_point_selector",
    "is_separated",
    "lap_counts",
    "lemma_case",
    "max_separated",
    "orbit_gap",
    "separation_horizon",
    "staggered_padding",
    "verify_family_members",
    "verify_pairwise_separation",
]
