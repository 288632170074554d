"""Testers for the approximate product property, its strict and periodic variants, and minimality."""

from .app import PeriodicCell, PeriodicSpecReport, test_app, test_periodic_exact_spec, test_strict_app
from .grid import CellKey, CellResult, PropertyGrid, PropertyReport, empirical_threshold, sample_targets
from .obstruction import (
    ContradictionQuantities,
    ObstructionWitness,
    minimality_obstruction,
    strict_app_contradiction_quantities,
)

__all__ = [
    "CellKey",
    "CellResult",
    "ContradictionQuantities",
    "ObstructionWitness",
    "PeriodicCell",
    "PeriodicSpecReport",
    "PropertyGrid",
    "PropertyReport",
    "empirical_threshold",
    "minimality_obstruction",
    "sample_targets",
    "strict_app_contradiction_quantities",
    "test_app",
    "test_periodic_exact_spec",
    "test_strict_app",
]
