"""Parameter grids, target sampling and per-cell reports of the property testers."""

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..systems import DynamicalSystem, Point
from ..tracing import TracingCertificate

TargetPolicy = Literal["adversarial", "random", "mixed"]
Outcome = Literal["certified", "witness-found", "no-witness-at-budget"]

CONSTRUCTIVE_STRATEGIES = frozenset({"trivial", "exact", "fixed_point", "periodic"})


class PropertyGrid(BaseModel):
    """Finite stand-in for the quantifiers over ``delta1``, ``delta2``, ``epsilon`` and ``n``."""

    model_config = ConfigDict(frozen=True)

    delta1: list[float] = Field(min_length=1, description="Gap fractions; gaps are at most 1 + delta1 * n")
    delta2: list[float] = Field(min_length=1, description="Mistake fractions; 0 is the strict variant")
    epsilon: list[float] = Field(min_length=1, description="Tracing scales")
    n: list[int] = Field(min_length=1, description="Block lengths")
    blocks: int = Field(default=32, ge=1, description="Blocks K traced per trial")
    trials: int = Field(default=1, ge=1, description="Target sequences sampled per cell")
    policy: TargetPolicy = "mixed"
    seed: int = 0

    @field_validator("delta1", "delta2", "epsilon", "n")
    @classmethod
    def _sorted_unique(cls, values: list) -> list:
        return sorted(set(values))

    @field_validator("delta1", "epsilon")
    @classmethod
    def _positive(cls, values: list[float]) -> list[float]:
        if any(not v > 0 for v in values):
            raise ValueError("values must be positive")
        return values

    @field_validator("delta2")
    @classmethod
    def _fraction(cls, values: list[float]) -> list[float]:
        if any(not 0 <= v <= 1 for v in values):
            raise ValueError("mistake fractions must lie in [0, 1]")
        return values

    @field_validator("n")
    @classmethod
    def _lengths(cls, values: list[int]) -> list[int]:
        if any(v < 1 for v in values):
            raise ValueError("block lengths must be at least 1")
        return values

    def strict(self) -> "PropertyGrid":
        """Same grid with ``delta2`` forced to 0."""
        return self.model_copy(update={"delta2": [0.0]})


def sample_targets(sys: DynamicalSystem, grid: PropertyGrid, trial: int) -> list[Point]:
    """
    ``grid.blocks`` targets for one trial.

    Adversarial targets cycle through the system's landmarks (distinct fixed points first);
    random targets are seeded samples. ``mixed`` uses landmarks for trial 0 and samples after.
    """
    adversarial = grid.policy == "adversarial" or (grid.policy == "mixed" and trial == 0)
    if adversarial:
        marks = sys.landmarks()
        if marks:
            return [marks[k % len(marks)] for k in range(grid.blocks)]
    rng = np.random.default_rng([grid.seed, trial])
    return sys.sample_points(rng, grid.blocks)


@dataclass(frozen=True)
class CellKey:
    delta1: float
    delta2: float
    epsilon: float
    n: int

    def dominated_by(self, other: "CellKey") -> bool:
        """Whether ``other`` is at least as permissive at the same block length."""
        return (
            self.n == other.n
            and self.delta1 <= other.delta1
            and self.delta2 <= other.delta2
            and self.epsilon <= other.epsilon
        )


@dataclass(frozen=True)
class CellResult:
    """One grid cell: all trials' certificates or the reason none was found."""

    key: CellKey
    outcome: Outcome
    certificates: list[TracingCertificate] = field(default_factory=list)
    strategies: list[str] = field(default_factory=list)
    candidates: int = 0
    exhaustive: bool = False
    reused_from: CellKey | None = None

    @property
    def passed(self) -> bool:
        return self.outcome != "no-witness-at-budget"


@dataclass(frozen=True)
class PropertyReport:
    """Outcomes of every cell, empirical ``M`` per parameter column and a one-line summary."""

    property: str
    system: str
    grid: Any
    cells: list[CellResult]
    empirical_m: dict[tuple, int | None] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)

    @property
    def trend(self) -> str:
        counts = {o: 0 for o in ("certified", "witness-found", "no-witness-at-budget")}
        for cell in self.cells:
            counts[cell.outcome] += 1
        parts = ", ".join(f"{v} {k}" for k, v in counts.items() if v)
        return f"{self.property} on {self.system}: {parts}"

    def cell(self, **key: Any) -> CellResult:
        """The unique cell matching the given key fields."""
        matches = [c for c in self.cells if all(getattr(c.key, k) == v for k, v in key.items())]
        if len(matches) != 1:
            raise KeyError(f"{len(matches)} cells match {key}")
        return matches[0]


def empirical_threshold(passes: dict[int, bool]) -> int | None:
    """
    Smallest tested ``n`` from which every larger tested ``n`` passes; None if the largest fails.
    """
    threshold = None
    for n in sorted(passes, reverse=True):
        if not passes[n]:
            break
        threshold = n
    return threshold
