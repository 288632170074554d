"""Uniform convergence of Birkhoff averages and clustering of empirical measures."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
import numpy as np

from ..errors import InvalidParams
from ..parallel import map_ordered
from ..systems import DynamicalSystem, TestFunctionFamily
from .empirical import EmpiricalMeasure, check_family, empirical_measure, weak_star_distance

logger = logging.getLogger(__name__)

MIN_STARTS = 8


@dataclass(frozen=True)
class AverageRow:
    """One Birkhoff average: start index, horizon, 1-based function index, value."""

    start: int
    n: int
    function: int
    average: float


@dataclass(frozen=True)
class UniqueErgodicityReport:
    """Spread of Birkhoff averages across starts, per horizon."""

    n_values: list[int]
    spreads: list[float]
    threshold: float
    factor: float
    consistent: bool
    rows: list[AverageRow] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "consistent with unique ergodicity" if self.consistent else "not uniquely ergodic at this scale"


def _running_means(values: np.ndarray, n_values: Sequence[int]) -> np.ndarray:
    sums = np.cumsum(values)
    return np.array([sums[n - 1] / n for n in n_values])


def unique_ergodicity_test(
        sys: DynamicalSystem,
        family: TestFunctionFamily,
        starts: Sequence[Any],
        n_values: Sequence[int],
        threshold: float = 0.05,
        factor: float = 2.0,
    ) -> UniqueErgodicityReport:
    """
    For each ``n`` the spread is the largest, over test functions, of the range of the
    Birkhoff averages across starts.

    The verdict is positive when the spread at the largest ``n`` is below ``threshold`` and
    is either zero or at most ``1/factor`` of the spread at the smallest ``n``.

    Raises:
        InvalidParams: With fewer than 8 starts or ``n_values`` not strictly increasing.
    """
    if len(starts) < MIN_STARTS:
        raise InvalidParams(f"At least {MIN_STARTS} starts are required, got {len(starts)}")
    ns = list(n_values)
    if not ns or ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:], strict=False)):
        raise InvalidParams(f"Horizons must be positive and strictly increasing, got {ns}")
    check_family(sys, family)
    points = [sys.coerce(x) for x in starts]
    horizon = ns[-1]

    def averages(x: Any) -> np.ndarray:
        traj = sys.trajectory(x, horizon)
        return np.array([_running_means(phi.along(sys, traj, horizon), ns) for phi in family.functions])

    # table[start, function, n]
    table = np.array(map_ordered(averages, points))
    spreads = [float((table[:, :, j].max(axis=0) - table[:, :, j].min(axis=0)).max()) for j in range(len(ns))]
    first, last = spreads[0], spreads[-1]
    consistent = last < threshold and (last == 0 or last <= first / factor)
    logger.info("Birkhoff spread on '%s': %.4g at n=%d -> %.4g at n=%d", sys.name, first, ns[0], last, ns[-1])
    rows = [
        AverageRow(start=s, n=n, function=i + 1, average=float(table[s, i, j]))
        for s in range(len(points))
        for j, n in enumerate(ns)
        for i in range(len(family))
    ]
    return UniqueErgodicityReport(ns, spreads, threshold, factor, consistent, rows)


@dataclass(frozen=True)
class MeasureClusters:
    """Single-linkage clusters (lists of input indices) of empirical measures."""

    clusters: list[list[int]]
    measures: list[EmpiricalMeasure]
    distances: np.ndarray
    eta: float

    @property
    def multiple(self) -> bool:
        return len(self.clusters) >= 2


def detect_measure_multiplicity(
        sys: DynamicalSystem,
        orbit_specs: Sequence[tuple[Any, int]],
        eta: float,
        family: TestFunctionFamily,
    ) -> MeasureClusters:
    """
    Link empirical measures of the ``(start, n)`` orbit specs whose distance is at most
    ``2 * eta`` and return the connected components, ordered by their smallest index.

    Raises:
        InvalidParams: With fewer than 2 orbit specs or ``eta <= 0``.
    """
    if len(orbit_specs) < 2:
        raise InvalidParams("At least 2 orbit specs are required")
    if not eta > 0:
        raise InvalidParams(f"Linkage scale must be positive, got {eta}")
    measures = map_ordered(lambda spec: empirical_measure(sys, spec[0], spec[1]), orbit_specs)
    size = len(measures)
    distances = np.zeros((size, size))
    graph = nx.Graph()
    graph.add_nodes_from(range(size))
    for i in range(size):
        for j in range(i + 1, size):
            distances[i, j] = distances[j, i] = weak_star_distance(measures[i], measures[j], family)
            if distances[i, j] <= 2 * eta:
                graph.add_edge(i, j)
    clusters = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    logger.info("%d empirical measures on '%s' form %d clusters at eta=%g", size, sys.name, len(clusters), eta)
    return MeasureClusters(clusters, measures, distances, eta)
