"""Catalog of named example systems ("the zoo")."""

import re
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..errors import UnknownSystem
from .models import (
    FullShiftParams,
    FullShiftSpec,
    IntervalMapSpec,
    IntervalParams,
    IntervalPiece,
    OrbitClosureSpec,
    RotationParams,
    RotationSpec,
    SftParams,
    SftSpec,
    SystemSpec,
    parse_system_spec,
)


def golden_angle(min_denominator: int = 10**12) -> Fraction:
    """Fibonacci ratio approximating ``(sqrt(5) - 1) / 2`` with denominator at least ``min_denominator``."""
    a, b = 1, 1
    while b < min_denominator:
        a, b = b, a + b
    return Fraction(a, b)


def full_shift(k: int = 2) -> SystemSpec:
    """Full shift on ``k`` symbols."""
    return FullShiftSpec(name=f"full_shift({k})", params=FullShiftParams(alphabet_size=k))


def golden_mean_sft() -> SystemSpec:
    """Binary sequences without two consecutive ones."""
    return SftSpec(name="golden_mean_sft", params=SftParams(alphabet_size=2, forbidden=("11",)))


def density_zero_subshift() -> SystemSpec:
    """Orbit closure of the sequence with ones exactly at indices 2^j."""
    return OrbitClosureSpec(name="density_zero_subshift")


def rotation(alpha: float | str | Fraction | None = None) -> SystemSpec:
    """Circle rotation by ``alpha`` (golden angle by default)."""
    angle = golden_angle() if alpha is None else alpha
    label = "rotation" if alpha is None else f"rotation({alpha})"
    return RotationSpec(name=label, params=RotationParams(alpha=angle))


def interval_map(formula: str, lower: float = 0.0, upper: float = 1.0, name: str | None = None) -> SystemSpec:
    """Single-formula interval map."""
    return IntervalMapSpec(
        name=name or formula,
        params=IntervalParams(lower=lower, upper=upper, pieces=(IntervalPiece(upper=upper, formula=formula),)),
    )


def tent_map() -> SystemSpec:
    """``x -> 1 - |1 - 2x|`` on [0, 1]."""
    return interval_map("1 - Abs(1 - 2*x)", name="tent_map")


def halving_map() -> SystemSpec:
    """``x -> x/2`` on [0, 1]."""
    return interval_map("x/2", name="halving_map")


def logistic(r: float = 4.0) -> SystemSpec:
    """``x -> r x (1 - x)`` on [0, 1]."""
    return interval_map(f"{r}*x*(1 - x)", name=f"logistic({r})")


@dataclass(frozen=True)
class ZooEntry:
    """A named constructor; ``parameter`` describes its optional argument, if any."""

    name: str
    build: Callable[..., SystemSpec]
    parameter: str | None
    description: str


_CATALOG = (
    ZooEntry("full_shift", full_shift, "alphabet size k", "full shift on k symbols"),
    ZooEntry("golden_mean_sft", golden_mean_sft, None, "subshift of finite type forbidding 11"),
    ZooEntry("density_zero_subshift", density_zero_subshift, None, "orbit closure with ones at 2^j"),
    ZooEntry("rotation", rotation, "angle alpha", "circle rotation (golden angle by default)"),
    ZooEntry("tent_map", tent_map, None, "tent map on [0, 1]"),
    ZooEntry("halving_map", halving_map, None, "x/2 on [0, 1]"),
    ZooEntry("logistic", logistic, "parameter r", "logistic map on [0, 1]"),
)

_NAME_PATTERN = re.compile(r"^\s*(?P<name>[a-z_]+)\s*(?:\(\s*(?P<arg>[^)]*)\s*\))?\s*$")


def zoo_catalog() -> list[ZooEntry]:
    """All named example systems."""
    return list(_CATALOG)


def get_zoo_system(name: str) -> SystemSpec:
    """
    Build the zoo system called ``name``, e.g. ``full_shift(4)`` or ``logistic(2.5)``.

    Raises:
        UnknownSystem: If the name (or its argument) is not recognized.
    """
    match = _NAME_PATTERN.match(name)
    entries = {entry.name: entry for entry in _CATALOG}
    if not match or match["name"] not in entries:
        raise UnknownSystem(f"Unknown system '{name}'. Available: {', '.join(sorted(entries))}")
    entry, arg = entries[match["name"]], match["arg"]
    if arg is None or arg == "":
        return entry.build()
    if entry.parameter is None:
        raise UnknownSystem(f"System '{entry.name}' takes no argument")
    try:
        if entry.name == "full_shift":
            return entry.build(int(arg))
        if entry.name == "rotation":
            return entry.build(arg)
        return entry.build(float(arg))
    except ValueError as e:
        raise UnknownSystem(f"Bad argument for '{entry.name}': {arg!r}") from e


def resolve_system(value: str | dict[str, Any] | SystemSpec) -> SystemSpec:
    """Accept a zoo name, a ``{"kind": ..., "params": ...}`` mapping, or a ready specification."""
    if isinstance(value, str):
        return get_zoo_system(value)
    if isinstance(value, dict):
        return parse_system_spec(value)
    return value
