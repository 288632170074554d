"""Tracing certificates, their JSON form and the independent re-check."""

import logging
from dataclasses import dataclass, field
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from ..systems import DynamicalSystem, Point, PowerSystem, build_system, decode_point, encode_point, power_system
from ..systems.models import SystemSpec
from .predicate import mistake_counts
from .schedule import GapSchedule, TracingInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TracingCertificate:
    """A tracer ``z`` with the instance it traces and the recorded per-block mistake counts."""

    tracer: Point
    instance: TracingInstance
    mistakes: tuple[int, ...]
    horizon: int
    strategy: str = ""

    @property
    def max_gap(self) -> int:
        return self.instance.schedule.max_gap

    @property
    def mistake_fraction(self) -> float:
        """Largest per-block mistake fraction."""
        lengths = self.instance.schedule.lengths
        return max(c / m for c, m in zip(self.mistakes, lengths, strict=True))


class CertificateModel(BaseModel):
    """Serialized certificate; targets and tracer use :func:`ergolab.systems.encode_point`."""

    model_config = ConfigDict(frozen=True)

    system: SystemSpec
    power: int = Field(default=1, ge=1, description="Certificate is for the system iterated this many times")
    tracer: Any
    targets: list[Any]
    lengths: list[int]
    gaps: list[int]
    delta: float
    epsilon: float
    mistakes: list[int]
    horizon: int
    strategy: str = ""


def certificate_to_model(sys: DynamicalSystem, cert: TracingCertificate) -> CertificateModel:
    """Serializable form of ``cert`` for points of ``sys``."""
    base = sys.base if isinstance(sys, PowerSystem) else sys
    return CertificateModel(
        system=base.spec,
        power=sys.power if isinstance(sys, PowerSystem) else 1,
        tracer=encode_point(cert.tracer),
        targets=[encode_point(x) for x in cert.instance.targets],
        lengths=list(cert.instance.schedule.lengths),
        gaps=list(cert.instance.schedule.gaps),
        delta=cert.instance.delta,
        epsilon=cert.instance.epsilon,
        mistakes=list(cert.mistakes),
        horizon=cert.horizon,
        strategy=cert.strategy,
    )


def certificate_from_model(model: CertificateModel) -> tuple[DynamicalSystem, TracingCertificate]:
    """
    Rebuild the system and certificate from their serialized form.

    Raises:
        IllegalPoint: If a stored point is not in the phase space.
        NonPositiveEntry, EmptySchedule, InvalidParams: If the schedule is malformed.
    """
    sys = build_system(model.system)
    if model.power > 1:
        sys = power_system(sys, model.power)
    instance = TracingInstance(
        targets=tuple(decode_point(sys, x) for x in model.targets),
        schedule=GapSchedule(lengths=tuple(model.lengths), gaps=tuple(model.gaps)),
        delta=model.delta,
        epsilon=model.epsilon,
    )
    cert = TracingCertificate(
        tracer=decode_point(sys, model.tracer),
        instance=instance,
        mistakes=tuple(model.mistakes),
        horizon=model.horizon,
        strategy=model.strategy,
    )
    return sys, cert


@dataclass(frozen=True)
class BlockCheck:
    """Stored and recomputed mistake counts of one block."""

    block: int
    stored: int | None
    recomputed: int
    allowed: float

    @property
    def ok(self) -> bool:
        return self.stored == self.recomputed and self.recomputed <= self.allowed


@dataclass(frozen=True)
class CertificateCheck:
    """Outcome of re-checking a certificate."""

    valid: bool
    blocks: list[BlockCheck] = field(default_factory=list)
    horizon_ok: bool = True

    @property
    def failing_blocks(self) -> list[int]:
        """1-based indices of blocks over budget or disagreeing with the stored count."""
        return [b.block for b in self.blocks if not b.ok]


def verify_certificate(sys: DynamicalSystem, cert: TracingCertificate) -> CertificateCheck:
    """Recompute every mistake count from scratch and compare with the stored ones."""
    inst = cert.instance
    counts = mistake_counts(sys, cert.tracer, inst)
    blocks = [
        BlockCheck(
            block=k,
            stored=cert.mistakes[k - 1] if k <= len(cert.mistakes) else None,
            recomputed=count,
            allowed=inst.allowed_mistakes(k),
        )
        for k, count in enumerate(counts, start=1)
    ]
    horizon_ok = cert.horizon == inst.schedule.horizon and len(cert.mistakes) == len(counts)
    valid = horizon_ok and all(b.ok for b in blocks)
    if not valid:
        logger.info("Certificate invalid; failing blocks %s", [b.block for b in blocks if not b.ok])
    return CertificateCheck(valid=valid, blocks=blocks, horizon_ok=horizon_ok)
