"""Fixed points, periodic points and attraction for interval maps."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..errors import UnsupportedSystem
from ..systems import DynamicalSystem, IntervalSystem

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 2**12

PointStatus = Literal["isolated", "approximate", "degenerate"]
AttractionVerdict = Literal["attracting-on-samples", "not-attracting", "inconclusive"]


@dataclass(frozen=True)
class BasinSample:
    """Convergence evidence of one start."""

    start: float
    final_distance: float
    min_late_distance: float
    converged: bool
    monotone: bool


@dataclass(frozen=True)
class Attraction:
    """Verdict of :func:`is_attracting` with its per-start evidence."""

    verdict: AttractionVerdict
    samples: list[BasinSample] = field(default_factory=list)


@dataclass(frozen=True)
class FixedPointRecord:
    """
    A bracket ``[lo, hi]`` containing a zero of ``f^q(x) - x``.

    ``values`` holds ``f^q(x) - x`` at the bracket ends; they never have the same strict sign
    for isolated points. Degenerate records cover a plateau of (numerical) fixed points.
    """

    location: float
    bracket: tuple[float, float]
    values: tuple[float, float]
    period: int = 1
    status: PointStatus = "isolated"
    attraction: Attraction | None = None


def _require_interval(sys: DynamicalSystem) -> IntervalSystem:
    if not isinstance(sys, IntervalSystem):
        raise UnsupportedSystem(f"'{sys.name}' is not an interval map")
    return sys


def _bisect(sys: IntervalSystem, q: int, lo: np.ndarray, hi: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    h_lo = sys.evaluate_power(lo, q) - lo
    for _ in range(200):
        if np.all(hi - lo <= tol):
            break
        mid = (lo + hi) / 2
        h_mid = sys.evaluate_power(mid, q) - mid
        left = np.sign(h_mid) == np.sign(h_lo)
        lo = np.where(left, mid, lo)
        h_lo = np.where(left, h_mid, h_lo)
        hi = np.where(left, hi, mid)
    return lo, hi


def _scan(sys: IntervalSystem, q: int, resolution: int, tol: float) -> list[FixedPointRecord]:
    grid = np.linspace(sys.lower, sys.upper, resolution + 1)
    h = sys.evaluate_power(grid, q) - grid
    zero = np.abs(h) <= tol
    records: list[FixedPointRecord] = []

    # runs of grid zeros: single points are isolated, longer runs are plateaus
    index = 0
    while index < grid.size:
        if not zero[index]:
            index += 1
            continue
        end = index
        while end + 1 < grid.size and zero[end + 1]:
            end += 1
        lo, hi = grid[index], grid[end]
        status: PointStatus = "isolated" if end - index < 2 else "degenerate"
        records.append(FixedPointRecord((lo + hi) / 2, (lo, hi), (h[index], h[end]), q, status))
        index = end + 1

    change = np.flatnonzero((np.sign(h[:-1]) * np.sign(h[1:]) < 0) & ~zero[:-1] & ~zero[1:])
    if change.size:
        lo, hi = _bisect(sys, q, grid[change], grid[change + 1], tol)
        h_lo = sys.evaluate_power(lo, q) - lo
        h_hi = sys.evaluate_power(hi, q) - hi
        for a, b, ha, hb in zip(lo, hi, h_lo, h_hi, strict=True):
            records.append(FixedPointRecord(float((a + b) / 2), (float(a), float(b)), (float(ha), float(hb)), q))

    if not records and q == 1:
        i = int(np.argmin(np.abs(h)))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        logger.info("No sign change of f(x) - x on '%s'; reporting the closest bracket", sys.name)
        records.append(FixedPointRecord(float(grid[i]), (float(lo), float(hi)), (float(h[i]), float(h[i])), q, "approximate"))
    return sorted(records, key=lambda r: r.location)


def find_fixed_points(
        sys: DynamicalSystem,
        resolution: int = DEFAULT_RESOLUTION,
        tol: float | None = None,
    ) -> list[FixedPointRecord]:
    """
    Brackets of the zeros of ``f(x) - x``: sign changes refined by bisection to width ``tol``,
    exact grid zeros, and plateaus flagged ``degenerate``.

    Never empty: without any sign change the bracket around the minimizer of ``|f(x) - x|``
    is returned with status ``approximate``.
    """
    return find_periodic_points(sys, 1, resolution, tol)


def find_periodic_points(
        sys: DynamicalSystem,
        period: int,
        resolution: int = DEFAULT_RESOLUTION,
        tol: float | None = None,
    ) -> list[FixedPointRecord]:
    """
    Zeros of ``f^period(x) - x`` that are not points of a smaller period dividing ``period``.

    Examples:
        tent_map, period 2 -> points near 2/5 and 4/5
    """
    interval = _require_interval(sys)
    if period < 1 or resolution < 2:
        raise ValueError("Period and resolution must be at least 1 and 2")
    tol = interval.tolerance if tol is None else tol
    records = _scan(interval, period, resolution, tol)
    if period == 1:
        return records
    divisors = [d for d in range(1, period) if period % d == 0]
    removal = max(100 * tol, 1e-7)
    kept = []
    for record in records:
        x = np.array([record.location])
        if record.status == "degenerate" or all(abs(interval.evaluate_power(x, d)[0] - x[0]) > removal for d in divisors):
            kept.append(record)
    return kept


def is_attracting(
        sys: DynamicalSystem,
        p: float,
        starts: Sequence[float],
        horizon: int = 1000,
        tol: float | None = None,
        escape_radius: float = 1e-3,
    ) -> Attraction:
    """
    Whether every sampled orbit converges to ``p``.

    A start converges when it ends within ``tol`` of ``p`` and its distance to ``p`` is
    non-increasing over the second half of the horizon. An orbit that stays farther than
    ``escape_radius`` from ``p`` over that whole second half makes the verdict
    ``not-attracting``; anything else is ``inconclusive``.
    """
    interval = _require_interval(sys)
    tol = interval.tolerance if tol is None else tol
    p = interval.coerce(p)
    samples = []
    for x in starts:
        distance = np.abs(interval.trajectory(interval.coerce(x), horizon + 1) - p)
        late = distance[horizon // 2:]
        samples.append(BasinSample(
            start=float(x),
            final_distance=float(distance[-1]),
            min_late_distance=float(late.min()),
            converged=bool(distance[-1] <= tol),
            monotone=bool(np.all(np.diff(late) <= tol)),
        ))
    if all(s.converged and s.monotone for s in samples):
        verdict: AttractionVerdict = "attracting-on-samples"
    elif any(s.min_late_distance > escape_radius for s in samples):
        verdict = "not-attracting"
    else:
        verdict = "inconclusive"
    logger.debug("Attraction of %g on '%s': %s", p, interval.name, verdict)
    return Attraction(verdict, samples)


@dataclass(frozen=True)
class FnxgexReport:
    """Outcome of checking that orbits below ``p`` rise and orbits above ``p`` fall."""

    fixed_point: float
    hypothesis_ok: bool
    other_periodic: list[tuple[int, float]] = field(default_factory=list)
    violations: list[tuple[float, int, float]] = field(default_factory=list)
    checked: int = 0


def check_fnxgex(
        sys: DynamicalSystem,
        p: float,
        samples: Sequence[float],
        n: int,
        period_bound: int = 8,
        resolution: int = DEFAULT_RESOLUTION,
    ) -> FnxgexReport:
    """
    For ``x < p`` check ``f^j(x) > x`` and for ``x > p`` check ``f^j(x) < x``, ``1 <= j <= n``.

    Runs only when no periodic point other than ``p`` was found up to ``period_bound``;
    otherwise the report lists those points as a hypothesis violation and checks nothing.
    Each violation is ``(x, j, f^j(x))``.
    """
    interval = _require_interval(sys)
    p = interval.coerce(p)
    others = [
        (q, r.location)
        for q in range(1, period_bound + 1)
        for r in find_periodic_points(interval, q, resolution)
        if q > 1 or abs(r.location - p) > max(r.bracket[1] - r.bracket[0], 10 * interval.tolerance)
    ]
    if others:
        return FnxgexReport(p, hypothesis_ok=False, other_periodic=others)
    violations = []
    checked = 0
    for x in samples:
        x = interval.coerce(x)
        if x == p:
            continue
        checked += 1
        orbit = interval.trajectory(x, n + 1)[1:]
        bad = orbit <= x if x < p else orbit >= x
        violations += [(x, int(j) + 1, float(orbit[j])) for j in np.flatnonzero(bad)]
    return FnxgexReport(p, hypothesis_ok=True, violations=violations, checked=checked)
