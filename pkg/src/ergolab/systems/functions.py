"""Test functions on phase spaces: bumps around a center and coordinate harmonics."""

import math
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from ..errors import InvalidParams, NonPositiveRadius, UnsupportedSystem
from .dynamics import DynamicalSystem, IntervalSystem, Rotation
from .points import Point


@dataclass(frozen=True)
class TestFunction:
    """
    A continuous function on the phase space of one system, bounded by 1 in absolute value.

    ``bump``: ``clip((2r - d(y, center)) / r, 0, 1)``, equal to 1 on the closed r-ball and 0
    outside the open 2r-ball. ``harmonic``: ``cos`` of a coordinate, ``frequency`` half-turns
    across an interval or full turns around the circle.
    """

    __test__ = False

    descriptor: Literal["bump", "harmonic"]
    center: Point | None
    radius: float
    lipschitz: float
    frequency: int = 0

    def evaluate(self, sys: DynamicalSystem, y: Any) -> float:
        """Value at a single point."""
        if self.descriptor == "bump":
            return float(_bump(sys.distance(sys.coerce(y), self.center), self.radius))
        return float(self._harmonic(sys, np.array([float(sys.coerce(y))]))[0])

    def along(self, sys: DynamicalSystem, trajectory: Any, n: int) -> np.ndarray:
        """Values at the first ``n`` states of a trajectory."""
        if self.descriptor == "bump":
            return _bump(sys.distances_to(trajectory, n, self.center), self.radius)
        return self._harmonic(sys, sys.coordinates(trajectory)[:n])

    def _harmonic(self, sys: DynamicalSystem, xs: np.ndarray) -> np.ndarray:
        if isinstance(sys, Rotation):
            return np.cos(2 * np.pi * self.frequency * xs)
        if isinstance(sys, IntervalSystem):
            return np.cos(np.pi * self.frequency * (xs - sys.lower) / (sys.upper - sys.lower))
        raise UnsupportedSystem(f"Harmonics are not defined on '{sys.name}'")


def _bump(distance: Any, radius: float) -> Any:
    return np.clip((2 * radius - distance) / radius, 0.0, 1.0)


def bump_function(sys: DynamicalSystem, center: Any, radius: float) -> TestFunction:
    """
    Bump of inner radius ``radius`` around ``center``.

    Raises:
        NonPositiveRadius: If ``radius <= 0``.
        IllegalPoint: If ``center`` is not in the phase space.
    """
    if not radius > 0:
        raise NonPositiveRadius(f"Bump radius must be positive, got {radius}")
    return TestFunction("bump", sys.coerce(center), float(radius), lipschitz=1.0 / radius)


def harmonic_function(sys: DynamicalSystem, frequency: int) -> TestFunction:
    """Coordinate harmonic of the given frequency on a circle or interval system."""
    if isinstance(sys, Rotation):
        lipschitz = 2 * math.pi * frequency
    elif isinstance(sys, IntervalSystem):
        lipschitz = math.pi * frequency / (sys.upper - sys.lower)
    else:
        raise UnsupportedSystem(f"Harmonics are not defined on '{sys.name}'")
    return TestFunction("harmonic", None, 0.0, lipschitz=lipschitz, frequency=frequency)


@dataclass(frozen=True)
class TestFunctionFamily:
    """Ordered functions ``phi_1 .. phi_L`` with weights ``2^-i``."""

    __test__ = False

    system: str
    functions: tuple[TestFunction, ...]

    def __post_init__(self) -> None:
        if len(self.functions) < 4:
            raise InvalidParams("A test-function family needs at least 4 functions")

    @property
    def weights(self) -> np.ndarray:
        """``2^-1, 2^-2, ...``"""
        return 2.0 ** -np.arange(1, len(self.functions) + 1)

    def __len__(self) -> int:
        return len(self.functions)


def default_family(sys: DynamicalSystem, bumps: int = 8, radius: float = 0.2, harmonics: int = 4) -> TestFunctionFamily:
    """
    Bumps centered on the system's landmarks (topped up with seeded samples), followed by
    coordinate harmonics on circle and interval systems.
    """
    centers = list(sys.landmarks())[:bumps]
    if len(centers) < bumps:
        centers += sys.sample_points(np.random.default_rng(0), bumps - len(centers))
    functions = [bump_function(sys, c, radius) for c in centers]
    if isinstance(sys, (Rotation, IntervalSystem)):
        functions += [harmonic_function(sys, k) for k in range(1, harmonics + 1)]
    return TestFunctionFamily(system=sys.name, functions=tuple(functions))
