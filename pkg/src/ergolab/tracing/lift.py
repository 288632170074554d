"""Lifting tracing certificates of ``f^N`` to certificates of ``f``."""

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from ..errors import HorizonTooShort, InvalidParams, ModulusTooLarge
from ..systems import DynamicalSystem, IntervalSystem, Point, Rotation, SubshiftOfFiniteType
from .certificates import TracingCertificate
from .predicate import is_traced
from .schedule import GapSchedule, TracingInstance
from .search import gap_limit

logger = logging.getLogger(__name__)

DEFAULT_MODULUS_GRID = tuple(2.0**-k for k in range(1, 25))


def _near_pairs(sys: DynamicalSystem, gamma: float, samples: int, seed: int) -> list[tuple[Point, Point]]:
    rng = np.random.default_rng(seed)
    points = list(sys.landmarks()) + sys.sample_points(rng, samples)
    pairs: list[tuple[Point, Point]] = []
    if isinstance(sys, SubshiftOfFiniteType):
        agreement = max(sys.agreement_length(gamma), sys.memory)
        pairs += [(x, sys.point_with_prefix(x.word(agreement))) for x in points]
    elif isinstance(sys, Rotation):
        shift = Fraction(gamma)
        pairs += [(x, (x + s) % 1) for x in points for s in (shift, -shift)]
    elif isinstance(sys, IntervalSystem):
        pairs += [
            (x, min(max(x + s, sys.lower), sys.upper)) for x in points for s in (gamma, -gamma)
        ]
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            if sys.distance(a, b) <= gamma:
                pairs.append((a, b))
    return pairs


def modulus_holds(
        sys: DynamicalSystem,
        power: int,
        gamma: float,
        epsilon: float,
        samples: int = 128,
        seed: int = 0,
    ) -> bool:
    """
    Check on a verification set that ``d(x, y) <= gamma`` implies ``d(f^j x, f^j y) < epsilon``
    for every ``j < power``.
    """
    for x, y in _near_pairs(sys, gamma, samples, seed):
        if sys.distance(x, y) > gamma:
            continue
        gaps = sys.trajectory_distances(sys.trajectory(x, power), 0, sys.trajectory(y, power), 0, power)
        if gaps.max() >= epsilon:
            logger.debug("Modulus %g fails for power %d at scale %g", gamma, power, epsilon)
            return False
    return True


def find_modulus(
        sys: DynamicalSystem,
        power: int,
        epsilon: float,
        grid: Sequence[float] = DEFAULT_MODULUS_GRID,
        samples: int = 128,
        seed: int = 0,
    ) -> float | None:
    """Largest ``gamma`` of the grid passing :func:`modulus_holds`, or None."""
    for gamma in sorted(grid, reverse=True):
        if modulus_holds(sys, power, gamma, epsilon, samples, seed):
            return gamma
    return None


def lift_power_tracing(
        sys: DynamicalSystem,
        power: int,
        cert: TracingCertificate,
        gamma: float,
        remainder: int,
        epsilon: float,
        delta1: float,
        threshold: int = 0,
        samples: int = 128,
        seed: int = 0,
    ) -> TracingCertificate:
    """
    Turn a certificate for ``f^power`` at scale ``gamma`` into one for ``f`` at scale ``epsilon``.

    The input blocks have length ``b``; the output blocks have length ``n = m*power + remainder``
    with ``b = ceil(n / power)``, and gaps ``1 + power*(t - 1) + (b*power - n)``. The output
    mistake fraction is twice the input one and every output gap stays within ``1 + delta1 * n``.
    The identity case (``power=1``, ``remainder=0``) returns ``cert`` unchanged.

    Raises:
        HorizonTooShort: If ``m <= max(threshold, 1 + 2/delta1, 2)``.
        ModulusTooLarge: If ``gamma`` fails the uniform-continuity check for ``epsilon``.
        InvalidParams: On malformed inputs, or when an output gap exceeds ``1 + delta1 * n``.

    Examples:
        power=3, t=2, remainder=1 -> output gap 6
    """
    if power < 1 or not 0 <= remainder < power:
        raise InvalidParams(f"Need power >= 1 and 0 <= remainder < power, got {power}, {remainder}")
    if not delta1 > 0:
        raise InvalidParams("Gap fraction must be positive")
    lengths = set(cert.instance.schedule.lengths)
    if len(lengths) != 1:
        raise InvalidParams("Lifting needs equal block lengths")
    if cert.instance.epsilon > gamma:
        raise InvalidParams(f"Certificate scale {cert.instance.epsilon} exceeds the modulus {gamma}")
    block = lengths.pop()
    m = block if remainder == 0 else block - 1
    n = m * power + remainder
    horizon = math.floor(max(threshold, 1 + 2 / delta1, 2)) + 1
    if m < horizon:
        raise HorizonTooShort(f"Block multiple m={m} is below the required {horizon}")
    if power == 1 and remainder == 0:
        return cert
    if not modulus_holds(sys, power, gamma, epsilon, samples, seed):
        raise ModulusTooLarge(f"gamma={gamma} does not keep {power} iterates within {epsilon}")

    slack = block * power - n
    gaps = tuple(1 + power * (t - 1) + slack for t in cert.instance.schedule.gaps)
    limit = gap_limit(n, delta1)
    if max(gaps, default=1) > limit:
        raise InvalidParams(f"Lifted gap {max(gaps)} exceeds the bound {limit} = floor(1 + delta1 * {n})")
    instance = TracingInstance(
        targets=cert.instance.targets,
        schedule=GapSchedule(lengths=(n,) * len(cert.instance.targets), gaps=gaps),
        delta=min(1.0, 2 * cert.instance.delta),
        epsilon=epsilon,
    )
    ok, counts = is_traced(sys, cert.tracer, instance)
    if not ok:
        raise ModulusTooLarge(f"Lifted certificate fails at scale {epsilon}; gamma={gamma} is too large")
    return TracingCertificate(cert.tracer, instance, tuple(counts), instance.schedule.horizon, "lift")
