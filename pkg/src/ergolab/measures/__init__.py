"""Empirical invariant measures, Birkhoff averages and measure multiplicity."""

from .empirical import (
    EmpiricalMeasure,
    birkhoff_average,
    empirical_measure,
    integrate,
    pushforward_bound,
    weak_star_distance,
)
from .ergodicity import (
    AverageRow,
    MeasureClusters,
    UniqueErgodicityReport,
    detect_measure_multiplicity,
    unique_ergodicity_test,
)

__all__ = [
    "AverageRow",
    "EmpiricalMeasure",
    "MeasureClusters",
    "UniqueErgodicityReport",
    "birkhoff_average",
    "detect_measure_multiplicity",
    "empirical_measure",
    "integrate",
    "pushforward_bound",
    "unique_ergodicity_test",
    "weak_star_distance",
]
