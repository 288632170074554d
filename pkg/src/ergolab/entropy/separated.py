"""(n, epsilon)-separated sets, exact word counts, lap counts and entropy slopes."""

import logging
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from ..errors import InvalidEpsilon, InvalidParams, UnsupportedSystem
from ..systems import (
    DynamicalSystem,
    IntervalSystem,
    OrbitClosureShift,
    Point,
    Rotation,
    SubshiftOfFiniteType,
    SymbolicSystem,
)

logger = logging.getLogger(__name__)

Method = Literal["auto", "brute", "greedy"]

SEPARATION_SLACK = 1e-12
BRUTE_MAX_N = 14


def count_words(sys: DynamicalSystem, n: int) -> int:
    """
    Exact number of legal words of length ``n``.

    Raises:
        UnsupportedSystem: For non-symbolic systems (and orbit closures beyond the enumeration cap).

    Examples:
        full_shift(2), n=5 -> 32
        golden_mean_sft, n=5 -> 13
    """
    if not isinstance(sys, SymbolicSystem):
        raise UnsupportedSystem(f"'{sys.name}' is not a subshift")
    if n < 1:
        raise InvalidParams(f"Word length must be at least 1, got {n}")
    return sys.count_words(n)


@dataclass(frozen=True)
class SeparatedSet:
    """Points pairwise ``(n, epsilon)``-separated; ``degraded`` marks a brute request answered greedily."""

    points: list[Point]
    n: int
    epsilon: float
    method: Literal["brute", "greedy"]
    degraded: bool = False

    def __len__(self) -> int:
        return len(self.points)


def is_separated(sys: DynamicalSystem, x: Point, y: Point, n: int, epsilon: float) -> bool:
    """Whether ``max_{j<n} d(f^j x, f^j y) > epsilon``."""
    gaps = sys.trajectory_distances(sys.trajectory(x, n), 0, sys.trajectory(y, n), 0, n)
    return bool(gaps.max() > epsilon + SEPARATION_SLACK)


def check_separated(sys: DynamicalSystem, points: Sequence[Point], n: int, epsilon: float) -> list[tuple[int, int]]:
    """Index pairs that fail to separate (empty when the set is valid)."""
    return [
        (i, j)
        for i in range(len(points))
        for j in range(i + 1, len(points))
        if not is_separated(sys, points[i], points[j], n, epsilon)
    ]


def _cylinder_representatives(sys: SymbolicSystem, length: int, limit: int) -> list[Point] | None:
    """One point per legal word of ``length``; None if there are more than ``limit``."""
    if isinstance(sys, SubshiftOfFiniteType):
        if sys.count_words(length) > limit:
            return None
        if length <= sys.memory:
            return [sys.point_with_prefix(_extend(sys, w)) for w in sorted(sys._short_words(length))]
        # walks in the essential graph are exactly the legal words
        walks = [(node, node) for node in sys.states]
        for _ in range(length - sys.memory):
            walks = [(w + (nxt[-1],), nxt) for w, node in walks for nxt in sorted(sys.graph.successors(node))]
        return [sys.point_with_prefix(w) for w, _ in sorted(walks)]
    if isinstance(sys, OrbitClosureShift):
        if length > sys.max_word_length or len(sys.factors(length)) > limit:
            return None
        seen: dict[tuple[int, ...], Point] = {}
        for point in sys.cylinder_points(length):
            seen.setdefault(tuple(int(s) for s in point.word(length)), point)
        return [seen[w] for w in sorted(seen)]
    return None


def _extend(sys: SubshiftOfFiniteType, word: tuple[int, ...]) -> tuple[int, ...]:
    for node in sys.states:
        if node[:len(word)] == word:
            return node
    raise ValueError(f"Word {word} does not extend")


def _candidates(sys: DynamicalSystem, count: int, seed: int) -> list[Point]:
    if isinstance(sys, Rotation):
        from fractions import Fraction  # noqa: PLC0415

        return [Fraction(i, count) for i in range(count)]
    if isinstance(sys, IntervalSystem):
        return [float(v) for v in np.linspace(sys.lower, sys.upper, count)]
    return list(sys.landmarks()) + sys.sample_points(np.random.default_rng(seed), count)


def _greedy(sys: DynamicalSystem, candidates: Sequence[Point], n: int, epsilon: float) -> list[Point]:
    if isinstance(sys, SymbolicSystem):
        # separation is a difference among the first n + J - 1 symbols
        length = n + max(1, sys.agreement_length(epsilon)) - 1
        firsts: dict[tuple[int, ...], Point] = {}
        for x in candidates:
            firsts.setdefault(tuple(int(s) for s in x.word(length)), x)
        return list(firsts.values())
    if isinstance(sys, (IntervalSystem, Rotation)):
        return _greedy_real(sys, candidates, n, epsilon)
    chosen: list[Point] = []
    trajectories: list[Any] = []
    for x, traj in zip(candidates, sys.trajectories(candidates, n), strict=True):
        if all(sys.trajectory_distances(traj, 0, other, 0, n).max() > epsilon + SEPARATION_SLACK for other in trajectories):
            chosen.append(x)
            trajectories.append(traj)
    return chosen


def _greedy_real(sys: DynamicalSystem, candidates: Sequence[Point], n: int, epsilon: float) -> list[Point]:
    orbits = np.array([sys.coordinates(t)[:n] for t in sys.trajectories(candidates, n)], dtype=float)
    kept = np.empty((0, n))
    chosen: list[Point] = []
    for x, orbit in zip(candidates, orbits, strict=True):
        gaps = np.abs(kept - orbit)
        if isinstance(sys, Rotation):
            gaps = np.minimum(gaps, 1 - gaps)
        if np.all(gaps.max(axis=1, initial=0.0) > epsilon + SEPARATION_SLACK):
            chosen.append(x)
            kept = np.vstack([kept, orbit])
    return chosen


def max_separated(
        sys: DynamicalSystem,
        n: int,
        epsilon: float,
        method: Method = "auto",
        budget: int = 4096,
        seed: int = 0,
    ) -> SeparatedSet:
    """
    A large ``(n, epsilon)``-separated set.

    ``brute`` (subshifts, ``n <= 14``) is exact: points are separated iff their first
    ``n + J - 1`` symbols differ, so one point per such cylinder is a maximum set. ``greedy``
    scans ``budget`` candidates and returns a maximal set, a lower bound for ``s(n, epsilon)``.
    A brute request over budget degrades to greedy with ``degraded`` set.

    Raises:
        InvalidParams: If ``n < 1``.
        InvalidEpsilon: If ``epsilon <= 0``.
    """
    if n < 1:
        raise InvalidParams(f"Horizon must be at least 1, got {n}")
    if not epsilon > 0:
        raise InvalidEpsilon(f"Separation scale must be positive, got {epsilon}")
    if epsilon >= sys.diameter:
        return SeparatedSet([sys.sample_points(np.random.default_rng(seed), 1)[0]], n, epsilon, "brute")

    want_brute = method == "brute" or (method == "auto" and isinstance(sys, SymbolicSystem) and n <= BRUTE_MAX_N)
    if want_brute and isinstance(sys, SymbolicSystem):
        length = n + max(1, sys.agreement_length(epsilon)) - 1
        points = _cylinder_representatives(sys, length, budget)
        if points is not None:
            return SeparatedSet(points, n, epsilon, "brute")
        logger.info("Brute separated set on '%s' over budget at n=%d; using greedy", sys.name, n)
    points = _greedy(sys, _candidates(sys, budget, seed), n, epsilon)
    return SeparatedSet(points, n, epsilon, "greedy", degraded=want_brute)


def lap_counts(
        sys: DynamicalSystem,
        max_n: int,
        resolution: int = 2**21,
        max_pieces: int = 2**16,
    ) -> list[int]:
    """
    Number of maximal monotone pieces of ``f, f^2, ..., f^max_n``.

    ``f^k`` is monotone on each of its laps, so the laps of ``f^(k+1)`` inside one of them are
    the laps of ``f`` on its image. Laps are therefore tracked as image intervals with
    multiplicities and the counts are exact integers at any depth. ``resolution`` is the grid
    on which the turning points of ``f`` are located. Counting stops early, returning fewer
    than ``max_n`` values, once more than ``max_pieces`` distinct images are in play.
    """
    if not isinstance(sys, IntervalSystem):
        raise UnsupportedSystem(f"Lap counting needs an interval map, '{sys.name}' is not one")
    turns = np.asarray(sys.turning_points(resolution), dtype=float)
    images: dict[tuple[float, float], int] = {(sys.lower, sys.upper): 1}
    counts: list[int] = []
    for k in range(1, max_n + 1):
        lefts: list[float] = []
        rights: list[float] = []
        weights: list[int] = []
        for (a, b), weight in images.items():
            cuts = [a, *turns[(turns > a) & (turns < b)].tolist(), b]
            lefts += cuts[:-1]
            rights += cuts[1:]
            weights += [weight] * (len(cuts) - 1)
        ends = sys.evaluate(np.asarray(lefts + rights))
        lows = np.minimum(ends[:len(lefts)], ends[len(lefts):]).tolist()
        highs = np.maximum(ends[:len(lefts)], ends[len(lefts):]).tolist()
        merged: Counter[tuple[float, float]] = Counter()
        for lo, hi, weight in zip(lows, highs, weights, strict=True):
            merged[(lo, hi)] += weight
        counts.append(sum(weights))
        if len(merged) > max_pieces and k < max_n:
            logger.info("Lap images of '%s' exceed %d at n=%d; stopping", sys.name, max_pieces, k)
            break
        images = merged
    return counts


def count_laps(sys: DynamicalSystem, n: int, resolution: int = 2**21) -> int:
    """
    Number of laps of ``f^n``.

    Raises:
        InvalidParams: If too many distinct lap images appear before ``n``.
    """
    counts = lap_counts(sys, n, resolution)
    if len(counts) < n:
        raise InvalidParams(f"Lap images of '{sys.name}' grew too numerous before n={n}")
    return counts[-1]


def fit_slope(ns: Sequence[int], logs: Sequence[float]) -> tuple[float, float]:
    """
    Least-squares slope of ``logs`` against ``ns`` over the last ``max(4, ceil(len/2))`` values,
    clipped at 0, and the root-mean-square residual of the fit.
    """
    size = len(ns)
    keep = size if size < 4 else max(4, math.ceil(size / 2))
    x = np.asarray(ns[-keep:], dtype=float)
    y = np.asarray(logs[-keep:], dtype=float)
    (slope, intercept) = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return max(0.0, float(slope)), residual


@dataclass(frozen=True)
class EntropyEstimate:
    """Log-cardinalities per scale, fitted slopes, and exact slopes where available."""

    n_values: list[int]
    epsilons: list[float]
    log_counts: dict[float, list[float]]
    slopes: dict[float, float]
    residuals: dict[float, float]
    methods: dict[float, str]
    word_log_counts: list[float] | None = None
    word_slope: float | None = None
    lap_log_counts: list[float] | None = None
    lap_slope: float | None = None
    lap_degraded: bool = False
    degraded: list[tuple[float, int]] = field(default_factory=list)

    @property
    def estimate(self) -> float:
        """Best available entropy value: exact word or lap slope, else the max over scales."""
        if self.word_slope is not None:
            return self.word_slope
        if self.lap_slope is not None:
            return self.lap_slope
        return max(self.slopes.values(), default=0.0)

    @property
    def separated_estimate(self) -> float:
        """Maximum of the per-scale separated-set slopes."""
        return max(self.slopes.values(), default=0.0)


def entropy_estimate(
        sys: DynamicalSystem,
        epsilons: Sequence[float],
        n_values: Sequence[int],
        method: Method = "auto",
        budget: int = 4096,
        seed: int = 0,
        lap_resolution: int = 2**21,
        lap_max_pieces: int = 2**16,
    ) -> EntropyEstimate:
    """
    Slopes of ``ln s(n, epsilon)`` against ``n`` per scale, plus the exact word-count slope on
    subshifts and the lap-count slope on interval maps.

    When lap counting stops short of the largest ``n`` the lap slope is left out,
    ``lap_degraded`` is set and the estimate falls back to the separated-set slopes.

    Raises:
        InvalidParams: With fewer than 3 values of ``n``.
    """
    ns = sorted(set(n_values))
    if len(ns) < 3:
        raise InvalidParams("Entropy fits need at least 3 values of n")
    if not epsilons:
        raise InvalidParams("At least one scale is required")
    log_counts: dict[float, list[float]] = {}
    slopes: dict[float, float] = {}
    residuals: dict[float, float] = {}
    methods: dict[float, str] = {}
    degraded: list[tuple[float, int]] = []
    for epsilon in epsilons:
        logs = []
        used = set()
        for n in ns:
            found = max_separated(sys, n, epsilon, method, budget, seed)
            logs.append(math.log(len(found)))
            used.add(found.method)
            if found.degraded:
                degraded.append((epsilon, n))
        log_counts[epsilon] = logs
        slopes[epsilon], residuals[epsilon] = fit_slope(ns, logs)
        methods[epsilon] = "+".join(sorted(used))
        logger.debug("Scale %g on '%s': slope %.4f", epsilon, sys.name, slopes[epsilon])

    word_logs = word_slope = lap_logs = lap_slope = None
    lap_degraded = False
    if isinstance(sys, SymbolicSystem):
        word_logs = [math.log(sys.count_words(n)) for n in ns]
        word_slope, _ = fit_slope(ns, word_logs)
    elif isinstance(sys, IntervalSystem):
        laps = lap_counts(sys, ns[-1], lap_resolution, lap_max_pieces)
        if len(laps) == ns[-1]:
            lap_logs = [math.log(laps[n - 1]) for n in ns]
            lap_slope, _ = fit_slope(ns, lap_logs)
        else:
            lap_degraded = True
            logger.warning("Lap counts on '%s' stop at n=%d; using separated sets", sys.name, len(laps))
    return EntropyEstimate(
        n_values=ns,
        epsilons=list(epsilons),
        log_counts=log_counts,
        slopes=slopes,
        residuals=residuals,
        methods=methods,
        word_log_counts=word_logs,
        word_slope=word_slope,
        lap_log_counts=lap_logs,
        lap_slope=lap_slope,
        lap_degraded=lap_degraded,
        degraded=degraded,
    )
