"""Interval-map analysis: fixed and periodic points, attraction and the zero-entropy classifier."""

from .analysis import (
    DEFAULT_RESOLUTION,
    Attraction,
    BasinSample,
    FixedPointRecord,
    FnxgexReport,
    check_fnxgex,
    find_fixed_points,
    find_periodic_points,
    is_attracting,
)
from .classify import ClassificationRecord, ClassifierSettings, classify_zero_entropy_app

__all__ = [
    "DEFAULT_RESOLUTION",
    "Attraction",
    "BasinSample",
    "ClassificationRecord",
    "ClassifierSettings",
    "FixedPointRecord",
    "FnxgexReport",
    "check_fnxgex",
    "classify_zero_entropy_app",
    "find_fixed_points",
    "find_periodic_points",
    "is_attracting",
]
