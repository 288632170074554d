"""Dynamical systems: specifications, runtime maps, points, test functions and the zoo."""

from .codec import decode_point, encode_point
from .dynamics import (
    DynamicalSystem,
    IntervalSystem,
    OrbitClosureShift,
    PowerSystem,
    ProductSystem,
    Rotation,
    SubshiftOfFiniteType,
    SymbolicSystem,
    build_system,
    dist,
    orbit_segment,
    power_system,
    step,
)
from .functions import TestFunction, TestFunctionFamily, bump_function, default_family, harmonic_function
from .models import SystemSpec, dump_system_spec, parse_system_spec
from .points import OrbitSegment, Point, SymbolicPoint, density_zero_word
from .zoo import get_zoo_system, resolve_system, zoo_catalog

__all__ = [
    "DynamicalSystem",
    "IntervalSystem",
    "OrbitClosureShift",
    "OrbitSegment",
    "Point",
    "PowerSystem",
    "ProductSystem",
    "Rotation",
    "SubshiftOfFiniteType",
    "SymbolicPoint",
    "SymbolicSystem",
    "SystemSpec",
    "TestFunction",
    "TestFunctionFamily",
    "build_system",
    "bump_function",
    "decode_point",
    "default_family",
    "density_zero_word",
    "dist",
    "dump_system_spec",
    "encode_point",
    "get_zoo_system",
    "harmonic_function",
    "orbit_segment",
    "parse_system_spec",
    "power_system",
    "resolve_system",
    "step",
    "zoo_catalog",
]
