"""Periodic tracers with a uniform gap on subshifts of finite type."""

import logging
from collections.abc import Sequence
from typing import Any

from ..errors import InvalidParams
from ..systems import SubshiftOfFiniteType, SymbolicPoint
from .certificates import TracingCertificate
from .predicate import is_traced
from .schedule import GapSchedule, TracingInstance

logger = logging.getLogger(__name__)


def periodic_exact_tracer(
        sft: SubshiftOfFiniteType,
        targets: Sequence[Any],
        lengths: Sequence[int],
        epsilon: float,
        spacing: int,
    ) -> TracingCertificate | None:
    """
    Periodic ``z`` tracing every block with zero mistakes, gaps ``spacing + 1`` and period
    ``sum(m_k + spacing)``; None if no such point exists in the subshift.

    Block ``k`` pins the symbols ``s_k .. s_k + m_k + J - 2`` of ``z`` (``J`` the agreement
    length of ``epsilon``), which leaves ``spacing + 1 - J`` free symbols before the next
    block, the last block wrapping around to the first.
    """
    if len(targets) != len(lengths) or not lengths:
        raise InvalidParams("Need one block length per target")
    if spacing < 0:
        raise InvalidParams("Gap spacing must be nonnegative")
    points = tuple(sft.coerce(x) for x in targets)
    agreement = max(1, sft.agreement_length(epsilon))
    free = spacing + 1 - agreement
    words = [tuple(int(s) for s in x.word(m + agreement - 1)) for x, m in zip(points, lengths, strict=True)]

    period: list[int] = []
    for k, (word, m) in enumerate(zip(words, lengths, strict=True)):
        following = words[(k + 1) % len(words)]
        if free >= 0:
            if len(word) < sft.memory or len(following) < sft.memory:
                return None
            connector = sft.connecting_symbols(word, following, min_insert=free, max_insert=free)
            if connector is None:
                return None
            period.extend(word)
            period.extend(connector)
        else:
            overlap = -free
            if overlap > len(following) or word[m + spacing:] != following[:overlap]:
                return None
            period.extend(word[:m + spacing])
    if free < 0:
        repeats = 2 + (sft.memory + agreement) // len(period)
        if not sft.is_legal_word(period * repeats):
            return None

    tracer = SymbolicPoint.periodic(tuple(period))
    schedule = GapSchedule(lengths=tuple(lengths), gaps=(spacing + 1,) * (len(lengths) - 1))
    instance = TracingInstance(targets=points, schedule=schedule, delta=0.0, epsilon=epsilon)
    ok, counts = is_traced(sft, tracer, instance)
    if not ok:
        logger.warning("Periodic construction on '%s' failed re-verification", sft.name)
        return None
    return TracingCertificate(tracer, instance, tuple(counts), schedule.horizon, "periodic")


def find_periodic_exact_tracer(
        sft: SubshiftOfFiniteType,
        targets: Sequence[Any],
        lengths: Sequence[int],
        epsilon: float,
        max_spacing: int = 16,
    ) -> tuple[int, TracingCertificate] | None:
    """Smallest spacing ``M <= max_spacing`` admitting a periodic exact tracer, with its certificate."""
    for spacing in range(max_spacing + 1):
        cert = periodic_exact_tracer(sft, targets, lengths, epsilon, spacing)
        if cert is not None:
            return spacing, cert
    return None
