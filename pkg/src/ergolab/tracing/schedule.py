"""Gap schedules and tracing instances."""

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

from ..errors import EmptySchedule, InvalidEpsilon, InvalidParams, NonPositiveEntry
from ..systems import Point


def start_times(lengths: Sequence[int], gaps: Sequence[int]) -> list[int]:
    """
    Start times ``s_1 = 0`` and ``s_k = sum_{i<k} (m_i + t_i - 1)``.

    Raises:
        EmptySchedule: If ``lengths`` is empty.
        NonPositiveEntry: If a length or a used gap is below 1.
        InvalidParams: If fewer than ``len(lengths) - 1`` gaps are given.

    Examples:
        start_times([3, 3], [2]) -> [0, 4]
        start_times([2, 5, 1], [1, 3]) -> [0, 2, 9]
    """
    if not lengths:
        raise EmptySchedule("A gap schedule needs at least one block")
    if len(gaps) < len(lengths) - 1:
        raise InvalidParams(f"{len(lengths)} blocks need at least {len(lengths) - 1} gaps, got {len(gaps)}")
    if any(m < 1 for m in lengths) or any(t < 1 for t in gaps):
        raise NonPositiveEntry("Block lengths and gaps must be positive integers")
    steps = (m + t - 1 for m, t in zip(lengths[:-1], gaps, strict=False))
    return list(itertools.accumulate(steps, initial=0))


@dataclass(frozen=True)
class GapSchedule:
    """Block lengths ``m_k`` and gaps ``t_k``; start times are derived on access."""

    lengths: tuple[int, ...]
    gaps: tuple[int, ...]

    def __post_init__(self) -> None:
        start_times(self.lengths, self.gaps)

    @classmethod
    def uniform(cls, n: int, blocks: int, gap: int = 1) -> "GapSchedule":
        """``blocks`` blocks of length ``n`` separated by a constant gap."""
        return cls(lengths=(n,) * blocks, gaps=(gap,) * (blocks - 1))

    @property
    def starts(self) -> list[int]:
        """Start times ``s_1 .. s_K``."""
        return start_times(self.lengths, self.gaps)

    @property
    def horizon(self) -> int:
        """Number of tracer states the schedule inspects."""
        return self.starts[-1] + self.lengths[-1]

    @property
    def max_gap(self) -> int:
        """Largest gap actually used (1 for a single block)."""
        return max(self.gaps[:len(self.lengths) - 1], default=1)

    def __len__(self) -> int:
        return len(self.lengths)


@dataclass(frozen=True)
class TracingInstance:
    """Targets ``x_k``, a schedule, a mistake fraction ``delta`` and a scale ``epsilon``."""

    targets: tuple[Point, ...]
    schedule: GapSchedule
    delta: float
    epsilon: float

    def __post_init__(self) -> None:
        if len(self.targets) != len(self.schedule.lengths):
            raise InvalidParams(
                f"{len(self.targets)} targets for a schedule of {len(self.schedule.lengths)} blocks",
            )
        if not 0 <= self.delta <= 1:
            raise InvalidParams(f"Mistake fraction must lie in [0, 1], got {self.delta}")
        if not self.epsilon > 0:
            raise InvalidEpsilon(f"Tracing scale must be positive, got {self.epsilon}")

    def allowed_mistakes(self, k: int) -> float:
        """``delta * m_k`` for the 1-based block ``k`` (compared as a real number)."""
        return self.delta * self.schedule.lengths[k - 1]
