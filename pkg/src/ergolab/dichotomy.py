"""
Finite-scale check of "zero entropy iff uniquely ergodic" for systems with the approximate
product property.

The verdict never claims the theorem. It is ``CONSISTENT`` when the entropy side (slope at
or below the zero threshold) agrees with the ergodic side (one measure cluster and uniform
convergence of averages), ``INCONSISTENT`` when they disagree, and ``HYPOTHESIS-UNMET`` when
the product-property evidence fails, in which case the statement says nothing.
"""

import logging
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from .config.models import DichotomyParams
from .entropy import EntropyEstimate, entropy_estimate
from .measures import MeasureClusters, UniqueErgodicityReport, detect_measure_multiplicity, unique_ergodicity_test
from .properties import PropertyReport, test_app
from .systems import DynamicalSystem, Point, decode_point, default_family

logger = logging.getLogger(__name__)

Verdict = Literal["CONSISTENT", "INCONSISTENT", "HYPOTHESIS-UNMET"]


@dataclass(frozen=True)
class DichotomyRecord:
    system: str
    app: PropertyReport
    entropy: EntropyEstimate
    unique_ergodicity: UniqueErgodicityReport
    clusters: MeasureClusters
    zero_entropy: bool
    uniquely_ergodic: bool
    verdict: Verdict
    thresholds: dict[str, float]


def dichotomy_starts(sys: DynamicalSystem, count: int, seed: int, starts: list[Any] | None = None) -> list[Point]:
    """Explicit (encoded) starts if given, else landmarks topped up with seeded samples, ``count`` in all."""
    if starts:
        return [decode_point(sys, x) for x in starts]
    points = list(sys.landmarks())[:count]
    if len(points) < count:
        points += sys.sample_points(np.random.default_rng(seed), count - len(points))
    return points


def dichotomy(
        sys: DynamicalSystem,
        params: DichotomyParams | None = None,
        budget: int = 256,
        seed: int = 0,
    ) -> DichotomyRecord:
    """Run the product-property tester, the entropy estimate and both ergodic diagnostics."""
    params = params or DichotomyParams()
    grid = params.app.grid.model_copy(update={"seed": seed})
    app = test_app(sys, grid, budget, gap_mode=params.app.gap_mode, grid_resolution=params.app.grid_resolution)

    ent = params.entropy
    estimate = entropy_estimate(
        sys, ent.epsilons, ent.n_values, ent.method, ent.set_budget, seed, ent.lap_resolution,
    )

    ue = params.unique_ergodicity
    family = default_family(sys, ue.functions.bumps, ue.functions.radius, ue.functions.harmonics)
    starts = dichotomy_starts(sys, ue.start_count, seed, ue.starts)
    ue_report = unique_ergodicity_test(sys, family, starts, ue.n_values, ue.threshold, ue.factor)
    clusters = detect_measure_multiplicity(sys, [(x, ue.n_values[-1]) for x in starts], params.cluster_eta, family)

    zero = estimate.estimate <= params.zero_entropy
    uniquely = ue_report.consistent and len(clusters.clusters) == 1
    verdict: Verdict
    if not app.passed:
        verdict = "HYPOTHESIS-UNMET"
    elif zero == uniquely:
        verdict = "CONSISTENT"
    else:
        verdict = "INCONSISTENT"
    logger.info(
        "Dichotomy on '%s': entropy %.4f (zero=%s), uniquely ergodic=%s -> %s",
        sys.name, estimate.estimate, zero, uniquely, verdict,
    )
    return DichotomyRecord(
        system=sys.name,
        app=app,
        entropy=estimate,
        unique_ergodicity=ue_report,
        clusters=clusters,
        zero_entropy=zero,
        uniquely_ergodic=uniquely,
        verdict=verdict,
        thresholds={
            "zero_entropy": params.zero_entropy,
            "spread": ue.threshold,
            "improvement_factor": ue.factor,
            "cluster_eta": params.cluster_eta,
        },
    )
