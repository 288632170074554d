"""Gap schedules, the (delta, epsilon)-tracing predicate, tracer search and certificate lifting."""

from .certificates import (
    BlockCheck,
    CertificateCheck,
    CertificateModel,
    TracingCertificate,
    certificate_from_model,
    certificate_to_model,
    verify_certificate,
)
from .fixed_point import FixedPointTrace, trace_by_fixed_point
from .lift import find_modulus, lift_power_tracing, modulus_holds
from .periodic import find_periodic_exact_tracer, periodic_exact_tracer
from .predicate import is_traced, mistake_count, mistake_counts
from .schedule import GapSchedule, TracingInstance, start_times
from .search import SearchOutcome, candidate_pool, gap_limit, search_tracing, search_tracing_point

__all__ = [
    "BlockCheck",
    "CertificateCheck",
    "CertificateModel",
    "FixedPointTrace",
    "GapSchedule",
    "SearchOutcome",
    "TracingCertificate",
    "TracingInstance",
    "candidate_pool",
    "certificate_from_model",
    "certificate_to_model",
    "find_modulus",
    "find_periodic_exact_tracer",
    "gap_limit",
    "is_traced",
    "lift_power_tracing",
    "mistake_count",
    "mistake_counts",
    "modulus_holds",
    "periodic_exact_tracer",
    "search_tracing",
    "search_tracing_point",
    "start_times",
    "trace_by_fixed_point",
]
