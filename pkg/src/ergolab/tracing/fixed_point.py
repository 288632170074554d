"""Tracing by the orbit of a fixed point."""

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from ..errors import InvalidEpsilon, InvalidParams, NotFixedPoint
from ..systems import DynamicalSystem, IntervalSystem, Point


@dataclass(frozen=True)
class FixedPointTrace:
    """Mistake fractions of the constant tracer ``p`` per block length, and the empirical threshold."""

    fixed_point: Point
    epsilon: float
    delta: float | None
    fractions: dict[int, tuple[Fraction, ...]]
    threshold: int | None

    def worst(self, n: int) -> Fraction:
        """Largest per-block fraction at block length ``n``."""
        return max(self.fractions[n])


def trace_by_fixed_point(
        sys: DynamicalSystem,
        p: Any,
        targets: Sequence[Any],
        n_values: Sequence[int],
        epsilon: float,
        delta: float | None = None,
    ) -> FixedPointTrace:
    """
    Fractions ``|{j < n : d(f^j(x_k), p) > epsilon}| / n`` for each target and each ``n``.

    With ``delta`` given, ``threshold`` is the smallest tested ``M`` such that every tested
    ``n > M`` has all fractions below ``delta`` (0 when all pass); None when the largest
    tested ``n`` still fails.

    Raises:
        NotFixedPoint: If ``f(p) != p`` (beyond the interval tolerance for interval maps).

    Examples:
        halving_map, p=0, target 1, epsilon=0.1, n=10 -> fraction 4/10
    """
    if not epsilon > 0:
        raise InvalidEpsilon(f"Tracing scale must be positive, got {epsilon}")
    if not targets or not n_values or any(n < 1 for n in n_values):
        raise InvalidParams("Need at least one target and at least one positive block length")
    p = sys.coerce(p)
    tol = sys.tolerance if isinstance(sys, IntervalSystem) else 0.0
    if not sys.is_fixed(p, tol):
        raise NotFixedPoint(f"{p!r} is not a fixed point of '{sys.name}'")
    ns = sorted(set(n_values))
    longest = ns[-1]
    fractions: dict[int, list[Fraction]] = {n: [] for n in ns}
    for x in (sys.coerce(x) for x in targets):
        far = sys.distances_to(sys.trajectory(x, longest), longest, p) > epsilon
        running = np.cumsum(far)
        for n in ns:
            fractions[n].append(Fraction(int(running[n - 1]), n))

    threshold = None
    if delta is not None:
        threshold = 0
        for n in ns:
            if max(fractions[n]) >= delta:
                threshold = n
        if threshold == longest:
            threshold = None
    return FixedPointTrace(
        fixed_point=p,
        epsilon=epsilon,
        delta=delta,
        fractions={n: tuple(v) for n, v in fractions.items()},
        threshold=threshold,
    )
