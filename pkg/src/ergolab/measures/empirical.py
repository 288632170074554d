"""Empirical orbit measures, Birkhoff averages and the weighted weak-* distance."""

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import FamilyMismatch, InvalidParams
from ..systems import DynamicalSystem, OrbitSegment, Point, TestFunction, TestFunctionFamily


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform weights ``1/n`` on the states ``x, f(x), ..., f^{n-1}(x)``."""

    system: DynamicalSystem
    base: Point
    n: int
    trajectory: Any

    @property
    def support(self) -> list[Point]:
        return self.segment.states

    @property
    def segment(self) -> OrbitSegment:
        return self.system.orbit_segment(self.base, self.n)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)

    def integrals(self, family: TestFunctionFamily) -> np.ndarray:
        """``[∫phi_1, ∫phi_2, ...]`` for every function of ``family``."""
        check_family(self.system, family)
        return np.array([integrate(self, phi) for phi in family.functions])


def check_family(sys: DynamicalSystem, family: TestFunctionFamily) -> None:
    if family.system != sys.name:
        raise FamilyMismatch(f"Family built for '{family.system}' used on '{sys.name}'")


def empirical_measure(sys: DynamicalSystem, x: Any, n: int) -> EmpiricalMeasure:
    """
    Empirical measure of the orbit segment of length ``n`` from ``x``.

    Raises:
        InvalidParams: If ``n < 1``.
        IllegalPoint: If ``x`` is not in the phase space.
    """
    if n < 1:
        raise InvalidParams(f"Orbit length must be at least 1, got {n}")
    x = sys.coerce(x)
    return EmpiricalMeasure(system=sys, base=x, n=n, trajectory=sys.trajectory(x, n))


def integrate(mu: EmpiricalMeasure, phi: TestFunction) -> float:
    """Mean of ``phi`` over the support."""
    return float(np.mean(phi.along(mu.system, mu.trajectory, mu.n)))


def birkhoff_average(sys: DynamicalSystem, x: Any, phi: TestFunction, n: int) -> float:
    """``(1/n) * sum phi(f^k x)`` over ``k < n``, evaluated state by state."""
    if n < 1:
        raise InvalidParams(f"Orbit length must be at least 1, got {n}")
    states = sys.orbit_segment(sys.coerce(x), n).states
    return sum(phi.evaluate(sys, y) for y in states) / n


def weak_star_distance(mu: EmpiricalMeasure, nu: EmpiricalMeasure, family: TestFunctionFamily) -> float:
    """
    ``sum_i 2^-i |∫phi_i dmu - ∫phi_i dnu|``.

    Raises:
        FamilyMismatch: If the measures or the family belong to different systems.
    """
    if mu.system.name != nu.system.name:
        raise FamilyMismatch(f"Measures on '{mu.system.name}' and '{nu.system.name}' are not comparable")
    return float(np.sum(family.weights * np.abs(mu.integrals(family) - nu.integrals(family))))


def pushforward_bound(family: TestFunctionFamily, n: int) -> float:
    """Upper bound on the distance between the measures of ``(x, n)`` and ``(f(x), n)``."""
    return 2 * float(np.sum(family.weights)) / n
