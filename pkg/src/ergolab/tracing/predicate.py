"""
Mistake counting and the tracing predicate.

The checker only uses ``DynamicalSystem.trajectory``/``trajectory_distances`` and never
shares code with the searchers in :mod:`ergolab.tracing.search`.
"""

from typing import Any

import numpy as np

from ..errors import IndexOutOfRange
from ..systems import DynamicalSystem, Point
from .schedule import TracingInstance


class _TargetTrajectories:
    """Trajectories of the targets, computed once per distinct (target, length)."""

    def __init__(self, sys: DynamicalSystem):
        self.sys = sys
        self._cache: dict[tuple[Any, int], Any] = {}

    def get(self, x: Point, n: int) -> Any:
        key = (x, n)
        if key not in self._cache:
            self._cache[key] = self.sys.trajectory(x, n)
        return self._cache[key]


def block_distances(sys: DynamicalSystem, z_trajectory: Any, start: int, x_trajectory: Any, n: int) -> np.ndarray:
    """``d(f^{start+j}(z), f^j(x))`` for ``j < n``."""
    return sys.trajectory_distances(z_trajectory, start, x_trajectory, 0, n)


def _block_count(sys: DynamicalSystem, z_traj: Any, inst: TracingInstance, k: int, cache: _TargetTrajectories) -> int:
    m = inst.schedule.lengths[k - 1]
    x_traj = cache.get(inst.targets[k - 1], m)
    d = block_distances(sys, z_traj, inst.schedule.starts[k - 1], x_traj, m)
    return int(np.count_nonzero(d > inst.epsilon))


def mistake_count(sys: DynamicalSystem, z: Point, inst: TracingInstance, k: int) -> int:
    """
    Number of ``j < m_k`` with ``d(f^{s_k+j}(z), f^j(x_k)) > epsilon`` for the 1-based block ``k``.

    Raises:
        IndexOutOfRange: If ``k`` is not a block index.
    """
    if not 1 <= k <= len(inst.targets):
        raise IndexOutOfRange(f"Block {k} outside 1..{len(inst.targets)}")
    z_traj = sys.trajectory(z, inst.schedule.horizon)
    return _block_count(sys, z_traj, inst, k, _TargetTrajectories(sys))


def mistake_counts(sys: DynamicalSystem, z: Point, inst: TracingInstance) -> list[int]:
    """Mistake counts of every block."""
    z_traj = sys.trajectory(z, inst.schedule.horizon)
    cache = _TargetTrajectories(sys)
    return [_block_count(sys, z_traj, inst, k, cache) for k in range(1, len(inst.targets) + 1)]


def is_traced(sys: DynamicalSystem, z: Point, inst: TracingInstance) -> tuple[bool, list[int]]:
    """Whether ``z`` (delta, epsilon)-traces the instance, plus all per-block mistake counts."""
    counts = mistake_counts(sys, z, inst)
    ok = all(count <= inst.allowed_mistakes(k) for k, count in enumerate(counts, start=1))
    return ok, counts
