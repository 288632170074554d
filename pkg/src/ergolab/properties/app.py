"""Finite-scale testers for the approximate product property and its strict and periodic variants."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from ..errors import InvalidParams, UnsupportedSystem
from ..interval.analysis import find_periodic_points
from ..systems import DynamicalSystem, IntervalSystem, Point, PowerSystem, SubshiftOfFiniteType
from ..tracing import (
    GapSchedule,
    TracingCertificate,
    TracingInstance,
    find_periodic_exact_tracer,
    is_traced,
    search_tracing,
)
from .grid import (
    CONSTRUCTIVE_STRATEGIES,
    CellKey,
    CellResult,
    Outcome,
    PropertyGrid,
    PropertyReport,
    empirical_threshold,
    sample_targets,
)

logger = logging.getLogger(__name__)


def _reuse(
        sys: DynamicalSystem,
        previous: CellResult,
        key: CellKey,
    ) -> CellResult | None:
    """Re-check the witnesses of a less permissive passing cell under ``key``."""
    certificates = []
    for cert in previous.certificates:
        instance = TracingInstance(
            targets=cert.instance.targets,
            schedule=cert.instance.schedule,
            delta=key.delta2,
            epsilon=key.epsilon,
        )
        ok, counts = is_traced(sys, cert.tracer, instance)
        if not ok:
            return None
        certificates.append(TracingCertificate(cert.tracer, instance, tuple(counts), cert.horizon, cert.strategy))
    return CellResult(
        key=key,
        outcome=previous.outcome,
        certificates=certificates,
        strategies=list(previous.strategies),
        reused_from=previous.key,
    )


def _search_cell(
        sys: DynamicalSystem,
        key: CellKey,
        trial_targets: list[list[Point]],
        blocks: int,
        budget: int,
        search_options: dict[str, Any],
    ) -> CellResult:
    certificates = []
    strategies = []
    candidates = 0
    for targets in trial_targets:
        outcome = search_tracing(
            sys, targets, key.n, key.delta1, key.delta2, key.epsilon,
            blocks=blocks, budget=budget, **search_options,
        )
        candidates += outcome.candidates
        if outcome.certificate is None:
            return CellResult(
                key=key,
                outcome="no-witness-at-budget",
                strategies=[outcome.strategy],
                candidates=candidates,
                exhaustive=outcome.exhaustive,
            )
        certificates.append(outcome.certificate)
        strategies.append(outcome.strategy)
    verdict: Outcome = "certified" if set(strategies) <= CONSTRUCTIVE_STRATEGIES else "witness-found"
    return CellResult(key, verdict, certificates, strategies, candidates)


def test_app(
        sys: DynamicalSystem,
        grid: PropertyGrid,
        budget: int = 256,
        name: str = "app",
        **search_options: Any,
    ) -> PropertyReport:
    """
    Search a tracer for every grid cell and sampled target sequence.

    A cell passes when every trial yields a certificate. Cells are visited in lexicographic
    ``(delta1, delta2, epsilon, n)`` order and a cell reuses the witnesses of any earlier
    passing cell it dominates, re-checking them instead of searching again. The empirical
    ``M`` of a ``(delta1, delta2, epsilon)`` column is the smallest tested ``n`` from which
    all larger tested ``n`` pass.
    """
    trial_targets = [sample_targets(sys, grid, trial) for trial in range(grid.trials)]
    keys = [
        CellKey(d1, d2, eps, n)
        for d1 in grid.delta1 for d2 in grid.delta2 for eps in grid.epsilon for n in grid.n
    ]
    cells: list[CellResult] = []
    for key in keys:
        result = None
        for previous in cells:
            if previous.passed and previous.key.dominated_by(key):
                result = _reuse(sys, previous, key)
                if result is not None:
                    break
        if result is None:
            result = _search_cell(sys, key, trial_targets, grid.blocks, budget, search_options)
        logger.debug("Cell %s on '%s': %s", key, sys.name, result.outcome)
        cells.append(result)

    empirical_m = {
        (d1, d2, eps): empirical_threshold({
            c.key.n: c.passed for c in cells if (c.key.delta1, c.key.delta2, c.key.epsilon) == (d1, d2, eps)
        })
        for d1 in grid.delta1 for d2 in grid.delta2 for eps in grid.epsilon
    }
    report = PropertyReport(property=name, system=sys.name, grid=grid, cells=cells, empirical_m=empirical_m)
    logger.info(report.trend)
    return report


def test_strict_app(
        sys: DynamicalSystem,
        grid: PropertyGrid,
        budget: int = 256,
        **search_options: Any,
    ) -> PropertyReport:
    """:func:`test_app` with the mistake fraction forced to 0."""
    return test_app(sys, grid.strict(), budget, name="strict-app", **search_options)


@dataclass(frozen=True)
class PeriodicCell:
    """Smallest uniform spacing found for one scale and length profile (None if none up to the cap)."""

    epsilon: float
    lengths: tuple[int, ...]
    spacing: int | None
    certificate: TracingCertificate | None = None


@dataclass(frozen=True)
class PeriodicSpecReport:
    """Per-scale spacing ``M(epsilon)``: the largest spacing any profile needed."""

    system: str
    cells: list[PeriodicCell]
    spacings: dict[float, int | None] = field(default_factory=dict)
    max_spacing: int = 16

    @property
    def passed(self) -> bool:
        return all(cell.spacing is not None for cell in self.cells)


def _profile_targets(sys: DynamicalSystem, count: int) -> list[Point]:
    marks = sys.landmarks()
    return [marks[k % len(marks)] for k in range(count)]


def _interval_periodic_tracer(
        sys: IntervalSystem,
        targets: Sequence[Point],
        lengths: Sequence[int],
        epsilon: float,
        max_spacing: int,
        period_bound: int,
    ) -> tuple[int, TracingCertificate] | None:
    """Periodic points of small period whose period divides ``sum(m_k + M)``."""
    candidates = [
        (q, record.location)
        for q in range(1, period_bound + 1)
        for record in find_periodic_points(sys, q)
        if record.status != "degenerate"
    ]
    for spacing in range(max_spacing + 1):
        period = sum(m + spacing for m in lengths)
        schedule = GapSchedule(lengths=tuple(lengths), gaps=(spacing + 1,) * (len(lengths) - 1))
        instance = TracingInstance(targets=tuple(targets), schedule=schedule, delta=0.0, epsilon=epsilon)
        for q, location in candidates:
            if period % q:
                continue
            ok, counts = is_traced(sys, location, instance)
            if ok:
                return spacing, TracingCertificate(location, instance, tuple(counts), schedule.horizon, "periodic-grid")
    return None


def test_periodic_exact_spec(
        sys: DynamicalSystem,
        profiles: Sequence[Sequence[int]],
        epsilons: Sequence[float],
        max_spacing: int = 16,
        period_bound: int = 8,
    ) -> PeriodicSpecReport:
    """
    For each scale, the smallest uniform spacing ``M`` such that every length profile is
    traced with zero mistakes and gaps ``M + 1`` by a point of period ``sum(m_k + M)``.

    Subshifts of finite type use exact cycle constructions; interval maps try their
    periodic points up to ``period_bound``, which is evidence rather than proof.

    Raises:
        UnsupportedSystem: For rotations, orbit closures and any other system class.
        InvalidParams: Without profiles or scales, or with a nonpositive block length.
    """
    if not profiles or not epsilons:
        raise InvalidParams("Need at least one length profile and one scale")
    if any(not p or min(p) < 1 for p in profiles):
        raise InvalidParams("Length profiles must be nonempty with positive entries")
    base = sys.base if isinstance(sys, PowerSystem) else sys
    if isinstance(sys, PowerSystem) or not isinstance(base, (SubshiftOfFiniteType, IntervalSystem)):
        raise UnsupportedSystem(f"No periodic tracer construction for '{sys.name}'")

    cells = []
    for epsilon in sorted(epsilons):
        for lengths in profiles:
            targets = _profile_targets(sys, len(lengths))
            if isinstance(sys, SubshiftOfFiniteType):
                found = find_periodic_exact_tracer(sys, targets, lengths, epsilon, max_spacing)
            else:
                found = _interval_periodic_tracer(sys, targets, lengths, epsilon, max_spacing, period_bound)
            spacing, cert = found if found is not None else (None, None)
            cells.append(PeriodicCell(epsilon, tuple(lengths), spacing, cert))

    spacings: dict[float, int | None] = {}
    for epsilon in sorted(epsilons):
        found = [c.spacing for c in cells if c.epsilon == epsilon]
        spacings[epsilon] = None if None in found else max(found)  # type: ignore[type-var]
    logger.info("Periodic spacing on '%s': %s", sys.name, spacings)
    return PeriodicSpecReport(sys.name, cells, spacings, max_spacing)


# keep pytest from collecting the testers when test modules import them
test_app.__test__ = False  # type: ignore[attr-defined]
test_strict_app.__test__ = False  # type: ignore[attr-defined]
test_periodic_exact_spec.__test__ = False  # type: ignore[attr-defined]
