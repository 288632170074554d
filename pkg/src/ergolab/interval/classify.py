"""Interval maps with zero entropy and the approximate product property: the attracting-fixed-point test."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..entropy import fit_slope, lap_counts
from ..measures import detect_measure_multiplicity
from ..systems import DynamicalSystem, default_family
from ..tracing import FixedPointTrace, trace_by_fixed_point
from .analysis import (
    DEFAULT_RESOLUTION,
    Attraction,
    FixedPointRecord,
    FnxgexReport,
    _require_interval,
    check_fnxgex,
    find_fixed_points,
    find_periodic_points,
    is_attracting,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassifierSettings:
    """Knobs of :func:`classify_zero_entropy_app`; defaults are the documented ones."""

    period_bound: int = 8
    resolution: int = DEFAULT_RESOLUTION
    samples: int = 64
    horizon: int = 1000
    lap_n: int = 16
    lap_resolution: int = 2**21
    app_delta: float = 0.1
    app_epsilon: float = 0.1
    app_n: int = 512
    cluster_eta: float = 0.05
    cluster_orbits: int = 8
    cluster_length: int = 2000
    fnxgex_samples: int = 128
    fnxgex_n: int = 64


@dataclass(frozen=True)
class ClassificationRecord:
    """All evidence gathered for one interval map, and whether the characterization holds."""

    system: str
    fixed_points: list[FixedPointRecord]
    periodic_points: dict[int, list[FixedPointRecord]]
    attraction: Attraction | None
    entropy_slope: float
    lap_counts: list[int]
    app_trace: FixedPointTrace | None
    clusters: list[list[int]]
    fnxgex: FnxgexReport | None
    satisfied: bool
    reasons: list[str] = field(default_factory=list)
    scope: str = ""

    @property
    def app_passed(self) -> bool:
        return self.app_trace is not None and self.app_trace.threshold is not None

    @property
    def verdict(self) -> str:
        return "characterization satisfied" if self.satisfied else "characterization fails"


def classify_zero_entropy_app(sys: DynamicalSystem, settings: ClassifierSettings | None = None) -> ClassificationRecord:
    """
    Check for a unique fixed point attracting every sampled orbit, with no other periodic
    points up to ``period_bound``, and cross-check with the lap-count entropy slope, the
    fixed-point tracer and the number of empirical-measure clusters.

    Examples:
        halving_map -> satisfied, slope 0, one cluster
        tent_map -> fails (fixed points 0 and 2/3, period-2 points)
        logistic(2.5) -> fails (fixed points 0 and 0.6)
    """
    interval = _require_interval(sys)
    cfg = settings or ClassifierSettings()
    reasons = []

    fixed = find_fixed_points(interval, cfg.resolution)
    periodic = {q: find_periodic_points(interval, q, cfg.resolution) for q in range(2, cfg.period_bound + 1)}
    genuine = [r for r in fixed if r.status != "degenerate"]
    if len(fixed) != 1 or not genuine:
        reasons.append(f"{len(fixed)} fixed point records ({', '.join(r.status for r in fixed)})")
    higher = {q: records for q, records in periodic.items() if records}
    if higher:
        reasons.append(f"periodic points of period {', '.join(map(str, sorted(higher)))}")

    starts = [float(x) for x in np.linspace(interval.lower, interval.upper, cfg.samples)]
    attraction = None
    app_trace = None
    fnxgex = None
    if genuine:
        p = genuine[0].location
        attraction = is_attracting(interval, p, starts, cfg.horizon)
        if attraction.verdict != "attracting-on-samples":
            reasons.append(f"fixed point {p:.6g} is {attraction.verdict}")
        app_trace = trace_by_fixed_point(
            interval, p, starts, [cfg.app_n // 4, cfg.app_n // 2, cfg.app_n], cfg.app_epsilon, cfg.app_delta,
        )
    satisfied = not reasons

    laps = lap_counts(interval, cfg.lap_n, cfg.lap_resolution)
    slope, _ = fit_slope(list(range(1, len(laps) + 1)), [math.log(c) for c in laps])

    orbit_starts = [float(x) for x in np.linspace(interval.lower, interval.upper, cfg.cluster_orbits)]
    # fixed points are orbits too, and separate measures when there are several
    orbit_starts += [r.location for r in genuine]
    clusters = detect_measure_multiplicity(
        interval, [(x, cfg.cluster_length) for x in orbit_starts], cfg.cluster_eta, default_family(interval),
    ).clusters

    if satisfied:
        samples = [float(x) for x in np.linspace(interval.lower, interval.upper, cfg.fnxgex_samples)]
        fnxgex = check_fnxgex(interval, genuine[0].location, samples, cfg.fnxgex_n, cfg.period_bound, cfg.resolution)

    record = ClassificationRecord(
        system=interval.name,
        fixed_points=fixed,
        periodic_points=periodic,
        attraction=attraction,
        entropy_slope=slope,
        lap_counts=laps,
        app_trace=app_trace,
        clusters=clusters,
        fnxgex=fnxgex,
        satisfied=satisfied,
        reasons=reasons,
        scope=f"periodic points up to period {cfg.period_bound} at resolution {cfg.resolution}",
    )
    logger.info("'%s': %s (%s)", interval.name, record.verdict, "; ".join(reasons) or "no obstruction found")
    return record
