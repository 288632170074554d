"""Non-minimality witnesses and the averages that make strict APP contradict unique ergodicity."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import InvalidEpsilon, InvalidParams
from ..measures import empirical_measure, integrate
from ..systems import DynamicalSystem, Point, bump_function
from ..tracing import TracingCertificate, search_tracing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObstructionWitness:
    """The orbit of ``x`` stays at least ``gamma`` away from ``other`` for ``horizon + 1`` steps."""

    x: Point
    other: Point
    gamma: float
    min_distance: float
    horizon: int


def minimality_obstruction(
        sys: DynamicalSystem,
        samples: Sequence[Any],
        horizon: int,
        gammas: Sequence[float],
    ) -> ObstructionWitness | None:
    """
    First pair ``(x, x')`` of distinct samples with ``min_{0 <= j <= horizon} d(f^j x, x') >= gamma``,
    trying the largest ``gamma`` first; None when the samples give no such evidence.
    """
    if horizon < 1:
        raise InvalidParams(f"Horizon must be at least 1, got {horizon}")
    points = [sys.coerce(x) for x in samples]
    trajectories = sys.trajectories(points, horizon + 1)
    gaps = {
        (i, j): float(sys.distances_to(trajectories[i], horizon + 1, points[j]).min())
        for i in range(len(points)) for j in range(len(points))
        if i != j
    }
    for gamma in sorted(gammas, reverse=True):
        for (i, j), gap in gaps.items():
            if gap >= gamma:
                logger.debug("Orbit of sample %d avoids the %g-ball of sample %d", i, gamma, j)
                return ObstructionWitness(points[i], points[j], gamma, gap, horizon)
    return None


@dataclass(frozen=True)
class ContradictionQuantities:
    """
    Birkhoff average of the bump around ``x'`` along ``x`` (``left``), its lower bound
    ``1 / (2m)`` along any strict tracer of the constant sequence ``x'`` (``lower_bound``),
    and, when a tracer is available, the average along it and ``(K - 1) / s_K``.
    """

    left: float
    lower_bound: float
    tracer_average: float | None = None
    start_ratio: float | None = None
    certificate: TracingCertificate | None = None

    @property
    def contradiction(self) -> bool:
        """Whether the two averages are separated as the strict property forces."""
        if self.tracer_average is None:
            return False
        return self.left < self.lower_bound <= self.tracer_average


def strict_app_contradiction_quantities(
        sys: DynamicalSystem,
        x: Any,
        x_prime: Any,
        gamma: float,
        m: int,
        horizon: int,
        epsilon: float,
        certificate: TracingCertificate | None = None,
        blocks: int = 32,
        budget: int = 256,
    ) -> ContradictionQuantities:
    """
    Quantities showing that a non-minimal system with strict APP has two different limits
    of Birkhoff averages for the bump of radius ``epsilon`` around ``x'``.

    Without ``certificate`` a zero-mistake tracer of ``blocks`` copies of ``x'`` (length
    ``m``, gaps at most ``1 + m``) is searched.

    Raises:
        InvalidEpsilon: Unless ``0 < epsilon < gamma / 3``.
    """
    if not 0 < epsilon < gamma / 3:
        raise InvalidEpsilon(f"Scale must lie in (0, {gamma / 3:g}), got {epsilon}")
    if m < 1 or horizon < 1:
        raise InvalidParams("Block length and horizon must be at least 1")
    x_prime = sys.coerce(x_prime)
    phi = bump_function(sys, x_prime, epsilon)
    left = integrate(empirical_measure(sys, x, horizon), phi)
    lower_bound = 1 / (2 * m)

    if certificate is None:
        outcome = search_tracing(sys, [x_prime], m, 1.0, 0.0, epsilon, blocks=blocks, budget=budget)
        certificate = outcome.certificate
    if certificate is None:
        logger.info("No strict tracer of '%s' found at budget", sys.name)
        return ContradictionQuantities(left, lower_bound)

    starts = certificate.instance.schedule.starts
    trajectory = sys.trajectory(certificate.tracer, certificate.horizon)
    tracer_average = float(np.mean(phi.along(sys, trajectory, certificate.horizon)))
    start_ratio = (len(starts) - 1) / starts[-1] if starts[-1] else None
    return ContradictionQuantities(left, lower_bound, tracer_average, start_ratio, certificate)
