"""
Tracing-point search.

Strategies are tried in order and every certificate is re-checked with
:func:`ergolab.tracing.predicate.is_traced` before it is returned:

- ``trivial``: the scale is at least the diameter, so any point traces.
- ``exact``: subshifts of finite type (and their powers); block words are joined by the
  shortest legal connecting words in the transition graph.
- ``fixed_point``: a fixed point with all gaps equal to the minimum gap.
- ``pool``: dynamic programming over all admissible gap sequences for each candidate tracer
  of a finite pool. For orbit closures the pool holds one point per cylinder of the whole
  horizon, which makes a failed search exhaustive.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

import numpy as np

from ..errors import InvalidEpsilon, InvalidParams
from ..parallel import first_ordered
from ..systems import (
    DynamicalSystem,
    IntervalSystem,
    OrbitClosureShift,
    Point,
    PowerSystem,
    Rotation,
    SubshiftOfFiniteType,
)
from .certificates import TracingCertificate
from .predicate import is_traced
from .schedule import GapSchedule, TracingInstance

logger = logging.getLogger(__name__)

Strategy = Literal["auto", "exact", "fixed_point", "pool"]
GapMode = Literal["joint", "unit"]


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a search; ``certificate`` is None when no witness was found."""

    certificate: TracingCertificate | None
    strategy: str
    candidates: int = 0
    exhausted: bool = False
    exhaustive: bool = False


def gap_limit(n: int, delta1: float) -> int:
    """Largest integer gap ``t`` with ``t <= 1 + delta1 * n`` in exact decimal arithmetic."""
    return math.floor(1 + Fraction(str(delta1)) * n)


def search_tracing_point(
        sys: DynamicalSystem,
        targets: Sequence[Any],
        n: int,
        delta1: float,
        delta2: float,
        epsilon: float,
        blocks: int | None = None,
        budget: int = 256,
        **kwargs: Any,
    ) -> TracingCertificate | None:
    """
    Find ``z`` tracing ``blocks`` blocks of length ``n`` with gaps ``<= 1 + delta1 * n`` and
    mistake fraction ``<= delta2`` at scale ``epsilon``; None when nothing is found at budget.

    Targets are cycled when fewer than ``blocks`` are given.

    Raises:
        InvalidParams: On negative fractions, ``n < 1`` or ``blocks < 1``.
        InvalidEpsilon: If ``epsilon <= 0``.
    """
    return search_tracing(sys, targets, n, delta1, delta2, epsilon, blocks, budget, **kwargs).certificate


def search_tracing(
        sys: DynamicalSystem,
        targets: Sequence[Any],
        n: int,
        delta1: float,
        delta2: float,
        epsilon: float,
        blocks: int | None = None,
        budget: int = 256,
        strategy: Strategy = "auto",
        gap_mode: GapMode = "joint",
        min_gap: int = 1,
        grid_resolution: int = 256,
        seed: int = 0,
    ) -> SearchOutcome:
    """Same as :func:`search_tracing_point` but reports which strategy ran and how far it got."""
    if n < 1:
        raise InvalidParams(f"Block length must be at least 1, got {n}")
    if delta1 < 0 or not 0 <= delta2 <= 1:
        raise InvalidParams(f"Need delta1 >= 0 and 0 <= delta2 <= 1, got {delta1}, {delta2}")
    if not epsilon > 0:
        raise InvalidEpsilon(f"Tracing scale must be positive, got {epsilon}")
    if not targets:
        raise InvalidParams("At least one target is required")
    blocks = len(targets) if blocks is None else blocks
    if blocks < 1 or budget < 1:
        raise InvalidParams("Number of blocks and budget must be positive")
    points = tuple(sys.coerce(targets[k % len(targets)]) for k in range(blocks))
    max_gap = gap_limit(n, delta1)
    if min_gap < 1:
        raise InvalidParams(f"Minimum gap must be at least 1, got {min_gap}")
    if min_gap > max_gap:
        return SearchOutcome(None, "none")

    if epsilon >= sys.diameter:
        cert = _certify(sys, points[0], points, n, [min_gap] * (blocks - 1), delta2, epsilon, "trivial")
        if cert is not None:
            return SearchOutcome(cert, "trivial")

    base, stride = (sys.base, sys.power) if isinstance(sys, PowerSystem) else (sys, 1)
    if strategy in ("auto", "exact") and isinstance(base, SubshiftOfFiniteType):
        found = _exact_subshift(base, stride, points, n, max_gap, epsilon, min_gap)
        if found is not None:
            tracer, gaps = found
            cert = _certify(sys, tracer, points, n, gaps, delta2, epsilon, "exact")
            if cert is not None:
                return SearchOutcome(cert, "exact")
            logger.warning("Exact construction on '%s' failed re-verification", sys.name)
        if strategy == "exact":
            return SearchOutcome(None, "exact")

    if strategy in ("auto", "fixed_point"):
        for p in sorted(sys.fixed_points(), key=sys.sort_key):
            cert = _certify(sys, p, points, n, [min_gap] * (blocks - 1), delta2, epsilon, "fixed_point")
            if cert is not None:
                return SearchOutcome(cert, "fixed_point")
        if strategy == "fixed_point":
            return SearchOutcome(None, "fixed_point")

    pool, exhaustive = candidate_pool(sys, points, _pool_horizon(blocks, n, max_gap), grid_resolution, seed)
    examined = pool[:budget]
    dp_gap = min_gap if gap_mode == "unit" else max_gap
    cache = {x: sys.trajectory(x, n) for x in dict.fromkeys(points)}

    def attempt(z: Point) -> TracingCertificate | None:
        gaps = _feasible_gaps(sys, z, points, n, (min_gap, dp_gap), epsilon, delta2, cache)
        if gaps is None:
            return None
        return _certify(sys, z, points, n, gaps, delta2, epsilon, "pool")

    hit = first_ordered(attempt, examined)
    exhausted = hit is None and len(pool) > budget
    logger.debug(
        "Pool search on '%s': %d of %d candidates, found=%s", sys.name, len(examined), len(pool), hit is not None,
    )
    return SearchOutcome(
        hit[1] if hit else None,
        "pool",
        candidates=hit[0] + 1 if hit else len(examined),
        exhausted=exhausted,
        exhaustive=exhaustive and not exhausted,
    )


def _certify(
        sys: DynamicalSystem,
        z: Point,
        targets: tuple[Point, ...],
        n: int,
        gaps: Sequence[int],
        delta: float,
        epsilon: float,
        strategy: str,
    ) -> TracingCertificate | None:
    schedule = GapSchedule(lengths=(n,) * len(targets), gaps=tuple(gaps))
    inst = TracingInstance(targets=targets, schedule=schedule, delta=delta, epsilon=epsilon)
    ok, counts = is_traced(sys, z, inst)
    if not ok:
        return None
    return TracingCertificate(z, inst, tuple(counts), schedule.horizon, strategy)


def _exact_subshift(
        sft: SubshiftOfFiniteType,
        stride: int,
        targets: tuple[Point, ...],
        n: int,
        max_gap: int,
        epsilon: float,
        min_gap: int = 1,
    ) -> tuple[Point, list[int]] | None:
    """
    Concatenate the words each block must reproduce, joined by shortest legal connectors.

    Under ``f^stride`` block ``k`` occupies base positions ``stride*s_k`` onward and needs
    the first ``stride*(n-1) + J`` symbols of its target, where ``J`` is the agreement
    length of ``epsilon``. A connector of ``c`` symbols yields the gap ``(c + J) / stride``.
    """
    agreement = sft.agreement_length(epsilon)
    span = stride * (n - 1) + agreement
    if agreement == 0 or span < sft.memory:
        return None
    max_insert = stride * max_gap - agreement
    if max_insert < 0:
        return None
    words = [tuple(int(s) for s in x.word(span)) for x in targets]
    word = list(words[0])
    gaps = []
    for left, right in zip(words, words[1:], strict=False):
        connector = sft.connecting_symbols(
            left, right, min_insert=max(0, stride * min_gap - agreement), max_insert=max_insert,
            accept=lambda c: (c + agreement) % stride == 0,
        )
        if connector is None:
            return None
        gaps.append((len(connector) + agreement) // stride)
        word.extend(connector)
        word.extend(right)
    return sft.point_with_prefix(word), gaps


def _pool_horizon(blocks: int, n: int, max_gap: int) -> int:
    return (blocks - 1) * (n + max_gap - 1) + n


def candidate_pool(
        sys: DynamicalSystem,
        targets: Sequence[Point],
        horizon: int,
        grid_resolution: int,
        seed: int = 0,
    ) -> tuple[list[Point], bool]:
    """
    Candidate tracers in a deterministic order, and whether the pool covers every cylinder
    of the horizon.
    """
    base, stride = (sys.base, sys.power) if isinstance(sys, PowerSystem) else (sys, 1)
    if isinstance(base, OrbitClosureShift):
        # one representative per cylinder of the whole horizon
        length = stride * horizon + base.horizon
        cylinders = {tuple(int(s) for s in z.word(length)): z for z in reversed(base.cylinder_points(length))}
        return [cylinders[word] for word in sorted(cylinders)], True
    if isinstance(base, Rotation):
        pool = [Fraction(i, grid_resolution) for i in range(grid_resolution)] + list(targets)
    elif isinstance(base, IntervalSystem):
        pool = [float(v) for v in np.linspace(base.lower, base.upper, grid_resolution)] + list(targets)
    else:
        rng = np.random.default_rng(seed)
        pool = list(targets) + base.landmarks() + base.sample_points(rng, grid_resolution)
    unique = {sys.sort_key(z): z for z in reversed(pool)}
    return [unique[key] for key in sorted(unique)], False


def _feasible_gaps(
        sys: DynamicalSystem,
        z: Point,
        targets: tuple[Point, ...],
        n: int,
        gap_range: tuple[int, int],
        epsilon: float,
        delta: float,
        cache: dict[Point, Any],
    ) -> list[int] | None:
    """
    Smallest-start gap sequence with every block within ``delta * n`` mistakes, by forward
    dynamic programming over reachable start times.
    """
    min_gap, max_gap = gap_range
    z_traj = sys.trajectory(z, _pool_horizon(len(targets), n, max_gap))
    allowed = delta * n
    layers: list[dict[int, int | None]] = []
    reachable: dict[int, int | None] = {0: None}
    for k, x in enumerate(targets):
        x_traj = cache[x]
        layer = {
            s: parent for s, parent in sorted(reachable.items())
            if np.count_nonzero(sys.trajectory_distances(z_traj, s, x_traj, 0, n) > epsilon) <= allowed
        }
        if not layer:
            return None
        layers.append(layer)
        if k == len(targets) - 1:
            break
        reachable = {}
        for s in layer:
            for t in range(min_gap, max_gap + 1):
                reachable.setdefault(s + n + t - 1, s)
    start = min(layers[-1])
    starts = [start]
    for layer in reversed(layers[1:]):
        start = layer[start]
        starts.append(start)
    starts.reverse()
    return [b - a - n + 1 for a, b in zip(starts, starts[1:], strict=False)]
