"""
Separated families built from four mutually far orbits.

For every index word ``xi`` in ``{1, 2}^N`` the targets are ``y_{2 xi(k) - 1}, y_{2 xi(k)}``
for ``k = 1..N``, each traced for ``m`` steps. Two members whose words first differ at
``n`` are separated at scale ``gamma`` within ``floor((1 + delta) * 2n * m)`` steps, which
gives ``2^N`` points separated over ``(1 + delta) * 2N * m`` steps.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from ..errors import InvalidParams, SearchFailed, SeparationFailure
from ..parallel import map_ordered
from ..systems import DynamicalSystem, Point, build_system, decode_point, encode_point
from ..systems.models import SystemSpec
from ..tracing import (
    CertificateModel,
    TracingCertificate,
    certificate_from_model,
    certificate_to_model,
    search_tracing,
    verify_certificate,
)

logger = logging.getLogger(__name__)

GapPolicy = Literal["minimal", "staggered"]

DISTANCE_SLACK = 1e-12


def orbit_gap(sys: DynamicalSystem, a: Point, b: Point, horizon: int) -> float:
    """``min d(f^i a, f^j b)`` over ``0 <= i, j < horizon``."""
    traj = sys.trajectory(a, horizon)
    other = b
    best = math.inf
    for _ in range(horizon):
        best = min(best, float(sys.distances_to(traj, horizon, other).min()))
        other = sys.step(other)
    return best


def four_point_selector(
        sys: DynamicalSystem,
        candidates: Sequence[Any],
        horizon: int,
        gamma: float,
    ) -> tuple[Point, Point, Point, Point] | None:
    """
    First four candidates (in lexicographic index order) whose orbits stay ``4 * gamma``
    apart at all pairs of times below ``horizon``; None if no such quadruple exists.
    """
    points = [sys.coerce(x) for x in candidates]
    if len(points) < 4:
        return None
    pairs = list(itertools.combinations(range(len(points)), 2))
    gaps = map_ordered(lambda ij: orbit_gap(sys, points[ij[0]], points[ij[1]], horizon), pairs)
    far = {
        pair for pair, gap in zip(pairs, gaps, strict=True)
        if gap >= 4 * gamma - DISTANCE_SLACK
    }
    for quad in itertools.combinations(range(len(points)), 4):
        if all(pair in far for pair in itertools.combinations(quad, 2)):
            return tuple(points[i] for i in quad)  # type: ignore[return-value]
    return None


def family_targets(ys: Sequence[Point], xi: Sequence[int]) -> tuple[Point, ...]:
    """Targets of member ``xi``: ``y_{2 xi(k) - 1}, y_{2 xi(k)}`` for each ``k``."""
    return tuple(ys[2 * s + offset - 2] for s in xi for offset in (1, 2))


def staggered_padding(xi: Sequence[int], m: int, delta: float) -> int:
    """Extra gap of member ``xi`` under the staggered policy."""
    return math.floor(delta * m) if sum(xi) % 2 else 0


@dataclass(frozen=True)
class SeparatedFamily:
    """``2^depth`` tracers indexed by words over ``{1, 2}``, in lexicographic order."""

    system: DynamicalSystem
    base_points: tuple[Point, Point, Point, Point]
    m: int
    delta: float
    depth: int
    gamma: float
    members: dict[tuple[int, ...], TracingCertificate]
    gap_policy: GapPolicy = "minimal"

    def __len__(self) -> int:
        return len(self.members)

    def starts(self, xi: tuple[int, ...]) -> tuple[int, ...]:
        """Block start times ``s_1(xi), s_2(xi), ...``."""
        return self.members[xi].instance.schedule.starts

    def tracer(self, xi: tuple[int, ...]) -> Point:
        return self.members[xi].tracer

    @property
    def bound(self) -> float:
        """Entropy lower bound ``ln 2 / (2 (1 + delta) m)``."""
        return math.log(2) / (2 * (1 + self.delta) * self.m)


def build_separated_family(
        sys: DynamicalSystem,
        ys: Sequence[Any],
        m: int,
        delta: float,
        depth: int,
        epsilon_trace: float,
        budget: int = 256,
        gap_policy: GapPolicy = "minimal",
        **search_kwargs: Any,
    ) -> SeparatedFamily:
    """
    Trace the target sequence of every ``xi`` in ``{1, 2}^depth`` with gaps at most
    ``1 + delta * m`` and mistake fraction at most ``delta`` at scale ``epsilon_trace``.

    With ``gap_policy="staggered"`` members whose word has an odd digit sum get
    ``floor(delta * m)`` extra steps in every gap, so start times drift apart between
    members and the second separation case occurs.

    Raises:
        InvalidParams: If ``delta`` is outside ``(0, 1/10)``, ``m`` or ``depth`` is below 1,
            fewer than four base points are given, or the base points are not ``4 * gamma`` apart.
        SearchFailed: Listing every index word without a witness at budget.
    """
    if not 0 < delta < 0.1:
        raise InvalidParams(f"Gap fraction must lie in (0, 1/10), got {delta}")
    if m < 1 or depth < 1:
        raise InvalidParams(f"Block length and depth must be at least 1, got m={m}, depth={depth}")
    if len(ys) != 4:
        raise InvalidParams(f"Exactly four base points are required, got {len(ys)}")
    points = tuple(sys.coerce(y) for y in ys)
    if four_point_selector(sys, points, m, epsilon_trace) is None:
        raise InvalidParams(f"Base points are not {4 * epsilon_trace:g}-separated over {m} steps")

    words = list(itertools.product((1, 2), repeat=depth))

    def trace(xi: tuple[int, ...]) -> TracingCertificate | None:
        pad = staggered_padding(xi, m, delta) if gap_policy == "staggered" else 0
        outcome = search_tracing(
            sys, family_targets(points, xi), m, delta, delta, epsilon_trace,
            blocks=2 * depth, budget=budget, min_gap=1 + pad, **search_kwargs,
        )
        return outcome.certificate

    certificates = map_ordered(trace, words)
    failed = [xi for xi, cert in zip(words, certificates, strict=True) if cert is None]
    if failed:
        raise SearchFailed(failed)
    logger.info("Built separated family of %d members on '%s' (m=%d, delta=%g)", len(words), sys.name, m, delta)
    return SeparatedFamily(
        system=sys,
        base_points=points,  # type: ignore[arg-type]
        m=m,
        delta=delta,
        depth=depth,
        gamma=epsilon_trace,
        members=dict(zip(words, certificates, strict=True)),  # type: ignore[arg-type]
        gap_policy=gap_policy,
    )


def first_difference(xi: Sequence[int], other: Sequence[int]) -> int | None:
    """1-based index of the first differing letter."""
    for n, (a, b) in enumerate(zip(xi, other, strict=True), start=1):
        if a != b:
            return n
    return None


def separation_horizon(family: SeparatedFamily, n: int) -> int:
    """Steps within which members first differing at ``n`` must separate."""
    return math.floor((1 + family.delta) * 2 * n * family.m)


@dataclass(frozen=True)
class PairCase:
    """
    Which argument separates a pair.

    ``case == 1``: the first differing blocks start within ``4 delta m`` of each other.
    ``case == 2``: block ``tau`` (1-based) is the first whose starts are farther apart,
    ``leader`` is the member starting it later and ``offset`` is the start of the next
    block of the other member minus that later start.
    """

    case: Literal[1, 2]
    block: int
    tau: int | None = None
    leader: tuple[int, ...] | None = None
    offset: int | None = None

    def offset_in_range(self, m: int, delta: float) -> bool:
        """Whether ``(1 - 5 delta) m <= offset <= (1 - 3 delta) m``."""
        if self.offset is None:
            return False
        return (1 - 5 * delta) * m - DISTANCE_SLACK <= self.offset <= (1 - 3 * delta) * m + DISTANCE_SLACK


def lemma_case(family: SeparatedFamily, xi: tuple[int, ...], other: tuple[int, ...]) -> PairCase:
    """Classify a pair of distinct members by the drift of their block start times."""
    n = first_difference(xi, other)
    if n is None:
        raise InvalidParams("Members must differ")
    block = 2 * n - 1
    starts, other_starts = family.starts(xi), family.starts(other)
    limit = 4 * family.delta * family.m
    if abs(starts[block - 1] - other_starts[block - 1]) <= limit:
        return PairCase(case=1, block=block)
    tau = next(k for k in range(1, block + 1) if abs(starts[k - 1] - other_starts[k - 1]) > limit)
    if starts[tau - 1] < other_starts[tau - 1]:
        xi, other = other, xi
        starts, other_starts = other_starts, starts
    return PairCase(case=2, block=block, tau=tau, leader=xi, offset=other_starts[tau] - starts[tau - 1])


@dataclass(frozen=True)
class SeparationResult:
    """Outcome of checking all member pairs."""

    ok: bool
    bound: float
    pairs: int
    cases: dict[int, int] = field(default_factory=dict)
    min_achieved: float = math.inf


def verify_pairwise_separation(family: SeparatedFamily) -> SeparationResult:
    """
    Check every pair of members for separation above ``gamma`` within the horizon of its
    first difference, by direct orbit comparison.

    Raises:
        SeparationFailure: For the first failing pair in lexicographic order.
    """
    sys = family.system
    words = sorted(family.members)
    if not words:
        raise InvalidParams("Family has no members")
    longest = separation_horizon(family, family.depth)
    trajectories = dict(zip(words, map_ordered(lambda xi: sys.trajectory(family.tracer(xi), longest), words), strict=True))
    pairs = list(itertools.combinations(words, 2))

    def check(pair: tuple[tuple[int, ...], tuple[int, ...]]) -> tuple[float, int]:
        xi, other = pair
        horizon = separation_horizon(family, first_difference(xi, other))  # type: ignore[arg-type]
        achieved = float(sys.trajectory_distances(trajectories[xi], 0, trajectories[other], 0, horizon).max())
        return achieved, horizon

    results = map_ordered(check, pairs)
    cases = {1: 0, 2: 0}
    for (xi, other), (achieved, horizon) in zip(pairs, results, strict=True):
        if not achieved > family.gamma + DISTANCE_SLACK:
            raise SeparationFailure(xi, other, achieved, horizon)
        cases[lemma_case(family, xi, other).case] += 1
    logger.info("All %d member pairs separated (cases %s)", len(pairs), cases)
    return SeparationResult(
        ok=True,
        bound=family.bound,
        pairs=len(pairs),
        cases=cases,
        min_achieved=min((a for a, _ in results), default=math.inf),
    )


def verify_family_members(family: SeparatedFamily) -> list[tuple[int, ...]]:
    """Index words whose certificate fails re-verification (empty when all pass)."""
    checks = map_ordered(lambda xi: verify_certificate(family.system, family.members[xi]), sorted(family.members))
    return [xi for xi, check in zip(sorted(family.members), checks, strict=True) if not check.valid]


class MemberModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    xi: list[int]
    certificate: CertificateModel


class FamilyModel(BaseModel):
    """Serialized separated family."""

    model_config = ConfigDict(frozen=True)

    system: SystemSpec
    base_points: list[Any] = Field(min_length=4, max_length=4)
    m: int = Field(ge=1)
    delta: float = Field(gt=0, lt=0.1)
    depth: int = Field(ge=1)
    gamma: float = Field(gt=0)
    gap_policy: GapPolicy = "minimal"
    members: list[MemberModel]


def family_to_model(family: SeparatedFamily) -> FamilyModel:
    return FamilyModel(
        system=family.system.spec,
        base_points=[encode_point(y) for y in family.base_points],
        m=family.m,
        delta=family.delta,
        depth=family.depth,
        gamma=family.gamma,
        gap_policy=family.gap_policy,
        members=[
            MemberModel(xi=list(xi), certificate=certificate_to_model(family.system, family.members[xi]))
            for xi in sorted(family.members)
        ],
    )


def family_from_model(model: FamilyModel) -> SeparatedFamily:
    """
    Rebuild a family; member certificates are decoded but not re-verified.

    Raises:
        InvalidParams: If a member index word has the wrong length or letters.
    """
    sys = build_system(model.system)
    members = {}
    for member in model.members:
        xi = tuple(member.xi)
        if len(xi) != model.depth or not set(xi) <= {1, 2}:
            raise InvalidParams(f"Bad member index {member.xi} for depth {model.depth}")
        _, members[xi] = certificate_from_model(member.certificate)
    return SeparatedFamily(
        system=sys,
        base_points=tuple(decode_point(sys, y) for y in model.base_points),  # type: ignore[arg-type]
        m=model.m,
        delta=model.delta,
        depth=model.depth,
        gamma=model.gamma,
        members=members,
        gap_policy=model.gap_policy,
    )


def family_cardinality_check(family: SeparatedFamily) -> bool:
    """Whether the family holds one member per index word."""
    return sorted(family.members) == list(itertools.product((1, 2), repeat=family.depth))
