"""Tests for gap schedules, the tracing predicate, tracer search, certificates and lifting."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergolab.errors import (
    EmptySchedule,
    HorizonTooShort,
    IndexOutOfRange,
    InvalidEpsilon,
    InvalidParams,
    NonPositiveEntry,
    NotFixedPoint,
)
from ergolab.systems import SymbolicPoint, power_system
from ergolab.tracing import (
    GapSchedule,
    TracingCertificate,
    TracingInstance,
    certificate_from_model,
    certificate_to_model,
    find_periodic_exact_tracer,
    gap_limit,
    is_traced,
    lift_power_tracing,
    mistake_count,
    modulus_holds,
    periodic_exact_tracer,
    search_tracing,
    search_tracing_point,
    start_times,
    trace_by_fixed_point,
    verify_certificate,
)

from .conftest import zoo

ZERO = SymbolicPoint.periodic("0")
ONE = SymbolicPoint.periodic("1")
FULL_SHIFT = zoo("full_shift(2)")


class TestSchedule:
    """Test cases for start times and schedules."""

    def test_examples(self):
        """Start times accumulate block lengths and gaps."""
        assert start_times([3, 3], [2]) == [0, 4]
        assert start_times([2, 5, 1], [1, 3]) == [0, 2, 9]

    @given(
        lengths=st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=8),
        gaps=st.lists(st.integers(min_value=1, max_value=50), min_size=8, max_size=8),
    )
    def test_consecutive_starts(self, lengths, gaps):
        """Consecutive starts differ by m_k + t_k - 1."""
        starts = start_times(lengths, gaps)
        assert starts[0] == 0
        for k in range(len(lengths) - 1):
            assert starts[k + 1] - starts[k] == lengths[k] + gaps[k] - 1

    def test_unit_gaps_are_contiguous(self):
        """Gap 1 places the next block right after the previous one."""
        schedule = GapSchedule.uniform(4, 3)
        assert schedule.starts == [0, 4, 8]
        assert schedule.horizon == 12
        assert schedule.max_gap == 1

    def test_empty_schedule(self):
        """A schedule needs a block."""
        with pytest.raises(EmptySchedule):
            start_times([], [])

    def test_non_positive_entries(self):
        """Zero lengths or gaps are rejected."""
        with pytest.raises(NonPositiveEntry):
            start_times([3, 0], [1])
        with pytest.raises(NonPositiveEntry):
            GapSchedule(lengths=(3, 3), gaps=(0,))

    def test_missing_gaps(self):
        """K blocks need K - 1 gaps."""
        with pytest.raises(InvalidParams, match="at least 2 gaps"):
            start_times([1, 1, 1], [1])

    def test_instance_validation(self):
        """Targets match blocks; delta and epsilon are in range."""
        schedule = GapSchedule.uniform(4, 2)
        with pytest.raises(InvalidParams):
            TracingInstance(targets=(ZERO,), schedule=schedule, delta=0.0, epsilon=0.5)
        with pytest.raises(InvalidParams):
            TracingInstance(targets=(ZERO, ONE), schedule=schedule, delta=1.5, epsilon=0.5)
        with pytest.raises(InvalidEpsilon):
            TracingInstance(targets=(ZERO, ONE), schedule=schedule, delta=0.0, epsilon=0.0)

    def test_gap_limit_is_exact(self):
        """The gap bound 1 + delta1 * n uses decimal arithmetic."""
        assert gap_limit(100, 0.29) == 30
        assert gap_limit(8, 0.25) == 3
        assert gap_limit(10, 0.0) == 1


class TestPredicate:
    """Test cases for mistake counting."""

    def _instance(self, delta: float) -> TracingInstance:
        return TracingInstance(targets=(ZERO,), schedule=GapSchedule.uniform(10, 1), delta=delta, epsilon=0.5)

    def test_allowed_mistakes_boundary(self, full_shift):
        """One mistake in ten steps passes at delta 0.1 and fails just below."""
        z = SymbolicPoint.eventually_periodic("1", "0")
        assert is_traced(full_shift, z, self._instance(0.1)) == (True, [1])
        assert is_traced(full_shift, z, self._instance(0.09)) == (False, [1])

    def test_mistake_count_per_block(self, full_shift):
        """Each block is compared from its own start time."""
        inst = TracingInstance(
            targets=(ZERO, ONE), schedule=GapSchedule(lengths=(4, 4), gaps=(2,)), delta=0.0, epsilon=0.5,
        )
        z = SymbolicPoint.eventually_periodic("00001111", "0")
        assert mistake_count(full_shift, z, inst, 1) == 0
        assert mistake_count(full_shift, z, inst, 2) == 1
        with pytest.raises(IndexOutOfRange):
            mistake_count(full_shift, z, inst, 3)

    @given(
        word=st.text(alphabet="01", min_size=1, max_size=14),
        deltas=st.tuples(st.sampled_from([0.0, 0.1, 0.25, 0.5]), st.sampled_from([0.0, 0.1, 0.25, 0.5])),
        epsilons=st.tuples(st.sampled_from([0.125, 0.25, 0.5]), st.sampled_from([0.125, 0.25, 0.5])),
    )
    def test_monotone_in_delta_and_epsilon(self, word, deltas, epsilons):
        """Loosening delta or epsilon never breaks tracing."""
        schedule = GapSchedule(lengths=(6, 6), gaps=(1,))
        z = SymbolicPoint.eventually_periodic(word, "0")
        (d1, d2), (e1, e2) = sorted(deltas), sorted(epsilons)
        tight = TracingInstance(targets=(ZERO, ONE), schedule=schedule, delta=d1, epsilon=e1)
        loose = TracingInstance(targets=(ZERO, ONE), schedule=schedule, delta=d2, epsilon=e2)
        if is_traced(FULL_SHIFT, z, tight)[0]:
            assert is_traced(FULL_SHIFT, z, loose)[0]

    def test_rotation_mistakes(self, rotation):
        """Rotations trace with exact arithmetic on the orbit."""
        inst = TracingInstance(
            targets=(Fraction(0),), schedule=GapSchedule.uniform(5, 1), delta=0.0, epsilon=0.01,
        )
        assert is_traced(rotation, Fraction(0), inst) == (True, [0])
        assert is_traced(rotation, Fraction(1, 2), inst)[1] == [5]


class TestSearch:
    """Test cases for the tracing-point search."""

    def test_exact_subshift_construction(self, full_shift):
        """Full-shift blocks are joined by connectors of the minimal length."""
        outcome = search_tracing(full_shift, [ZERO, ONE], n=8, delta1=0.25, delta2=0.0, epsilon=0.25, blocks=4)
        assert outcome.strategy == "exact"
        cert = outcome.certificate
        assert cert.instance.schedule.gaps == (2, 2, 2)
        assert cert.mistakes == (0, 0, 0, 0)
        assert verify_certificate(full_shift, cert).valid

    def test_golden_mean_connectors(self, golden_mean):
        """Connectors avoid forbidden words."""
        targets = [SymbolicPoint.periodic("0"), SymbolicPoint.periodic("10")]
        cert = search_tracing_point(golden_mean, targets, n=6, delta1=0.5, delta2=0.0, epsilon=0.25, blocks=3)
        assert cert is not None
        assert golden_mean.coerce(cert.tracer) == cert.tracer
        assert verify_certificate(golden_mean, cert).valid

    def test_trivial_scale(self, full_shift):
        """At scale >= diameter every point traces."""
        outcome = search_tracing(full_shift, [ZERO, ONE], n=4, delta1=0.0, delta2=0.0, epsilon=1.0)
        assert outcome.strategy == "trivial"

    def test_rotation_pool(self, rotation):
        """Rotations are searched over a grid of rational tracers."""
        outcome = search_tracing(
            rotation, [Fraction(0), Fraction(1, 2)], n=4, delta1=1.0, delta2=0.0, epsilon=0.25,
        )
        assert outcome.strategy == "pool"
        assert outcome.certificate.tracer == Fraction(0)
        assert outcome.certificate.instance.schedule.gaps == (1,)

    def test_strict_search_on_density_zero_is_exhaustive(self, density_zero):
        """No point of the orbit closure runs 0^n into the generator's start."""
        targets = [SymbolicPoint.periodic("0"), density_zero.generator_point(0)]
        outcome = search_tracing(density_zero, targets, n=16, delta1=0.25, delta2=0.0, epsilon=0.25, budget=1024)
        assert outcome.certificate is None
        assert outcome.exhaustive
        assert not outcome.exhausted

    def test_budget_exhaustion(self, density_zero):
        """A truncated pool is reported as exhausted and not exhaustive."""
        targets = [SymbolicPoint.periodic("0"), density_zero.generator_point(0)]
        outcome = search_tracing(density_zero, targets, n=16, delta1=0.25, delta2=0.0, epsilon=0.25, budget=1)
        assert outcome.certificate is None
        assert outcome.candidates == 1
        assert outcome.exhausted
        assert not outcome.exhaustive

    def test_fixed_point_strategy(self, density_zero):
        """With enough allowed mistakes the zero sequence traces the generator."""
        targets = [SymbolicPoint.periodic("0"), density_zero.generator_point(0)]
        outcome = search_tracing(density_zero, targets, n=64, delta1=0.25, delta2=0.25, epsilon=0.25)
        assert outcome.strategy == "fixed_point"
        assert outcome.certificate.tracer == SymbolicPoint.periodic((0,))

    def test_min_gap_above_limit(self, full_shift):
        """No schedule exists when the minimum gap exceeds the bound."""
        outcome = search_tracing(full_shift, [ZERO, ONE], n=4, delta1=0.25, delta2=0.0, epsilon=0.25, min_gap=5)
        assert outcome.certificate is None

    def test_invalid_arguments(self, full_shift):
        """Parameters are validated before searching."""
        with pytest.raises(InvalidParams):
            search_tracing(full_shift, [ZERO], n=0, delta1=0.1, delta2=0.0, epsilon=0.5)
        with pytest.raises(InvalidParams):
            search_tracing(full_shift, [ZERO], n=4, delta1=-0.1, delta2=0.0, epsilon=0.5)
        with pytest.raises(InvalidEpsilon):
            search_tracing(full_shift, [ZERO], n=4, delta1=0.1, delta2=0.0, epsilon=0.0)
        with pytest.raises(InvalidParams, match="target"):
            search_tracing(full_shift, [], n=4, delta1=0.1, delta2=0.0, epsilon=0.5)


class TestFixedPointTracing:
    """Test cases for constant tracers."""

    def test_halving_map(self, halving):
        """Orbits of x/2 reach the fixed point after a few steps."""
        trace = trace_by_fixed_point(halving, 0.0, [1.0], [10], epsilon=0.1)
        assert trace.fractions[10] == (Fraction(4, 10),)

    def test_not_fixed(self, halving):
        """Moved points are rejected."""
        with pytest.raises(NotFixedPoint):
            trace_by_fixed_point(halving, 0.5, [1.0], [10], epsilon=0.1)

    def test_density_zero_fraction(self, density_zero):
        """Mistakes of the zero tracer are the ones of the generator."""
        trace = trace_by_fixed_point(
            density_zero, SymbolicPoint.periodic("0"), [density_zero.generator_point(0)], [16, 64, 256],
            epsilon=0.5, delta=0.1,
        )
        assert trace.worst(16) == Fraction(4, 16)
        assert trace.worst(64) == Fraction(6, 64)
        assert trace.threshold == 16

    def test_threshold_none_when_last_fails(self, density_zero):
        """A failing largest n leaves the threshold undetermined."""
        trace = trace_by_fixed_point(
            density_zero, SymbolicPoint.periodic("0"), [density_zero.generator_point(0)], [16, 32],
            epsilon=0.5, delta=0.1,
        )
        assert trace.threshold is None


class TestCertificates:
    """Test cases for serialized certificates and the independent re-check."""

    @pytest.fixture
    def certificate(self, full_shift):
        """Exact full-shift certificate with two blocks."""
        return search_tracing_point(full_shift, [ZERO, ONE], n=8, delta1=0.25, delta2=0.0, epsilon=0.25)

    def test_model_reload_verifies(self, full_shift, certificate):
        """A reloaded certificate checks out."""
        model = certificate_to_model(full_shift, certificate)
        sys, cert = certificate_from_model(model.model_validate_json(model.model_dump_json()))
        assert sys.name == full_shift.name
        assert cert == certificate
        assert verify_certificate(sys, cert).valid

    def test_tampered_counts(self, full_shift, certificate):
        """Stored counts that disagree with the recomputed ones invalidate the certificate."""
        model = certificate_to_model(full_shift, certificate).model_copy(update={"mistakes": [0, 3]})
        sys, cert = certificate_from_model(model)
        check = verify_certificate(sys, cert)
        assert not check.valid
        assert check.failing_blocks == [2]

    def test_tampered_tracer(self, full_shift, certificate):
        """A different tracer makes mistakes the certificate does not allow."""
        model = certificate_to_model(full_shift, certificate).model_copy(update={"tracer": {"prefix": "", "tail": "1"}})
        sys, cert = certificate_from_model(model)
        check = verify_certificate(sys, cert)
        assert not check.valid
        assert 1 in check.failing_blocks

    def test_tampered_horizon(self, full_shift, certificate):
        """The stored horizon must match the schedule."""
        model = certificate_to_model(full_shift, certificate).model_copy(update={"horizon": certificate.horizon + 1})
        check = verify_certificate(*certificate_from_model(model))
        assert not check.valid
        assert not check.horizon_ok

    def test_power_certificate_reload(self, full_shift):
        """Certificates of f^N remember the power."""
        cube = power_system(full_shift, 3)
        cert = search_tracing_point(cube, [ZERO, ONE], n=5, delta1=1.0, delta2=0.0, epsilon=0.0625)
        model = certificate_to_model(cube, cert)
        assert model.power == 3
        sys, reloaded = certificate_from_model(model)
        assert sys.name == "full_shift(2)^3"
        assert verify_certificate(sys, reloaded).valid


class TestLift:
    """Test cases for lifting certificates of f^N."""

    @pytest.fixture
    def cube_certificate(self, full_shift):
        """Exact certificate for the cube of the full shift, blocks of 5."""
        cube = power_system(full_shift, 3)
        return search_tracing_point(cube, [ZERO, ONE], n=5, delta1=1.0, delta2=0.0, epsilon=0.0625)

    def test_power_gap(self, cube_certificate):
        """Connectors are padded to a multiple of the power."""
        assert cube_certificate.instance.schedule.gaps == (2,)

    def test_lift_with_remainder(self, full_shift, cube_certificate):
        """Blocks of n = 4*3 + 1 with gaps 1 + 3*(2-1) + 2."""
        lifted = lift_power_tracing(
            full_shift, 3, cube_certificate, gamma=0.0625, remainder=1, epsilon=0.5, delta1=1.0,
        )
        assert lifted.instance.schedule.lengths == (13, 13)
        assert lifted.instance.schedule.gaps == (6,)
        assert lifted.strategy == "lift"
        assert verify_certificate(full_shift, lifted).valid

    @pytest.mark.timeout(60)
    def test_lift_random_targets(self, full_shift):
        """Lifted certificates of random target sequences re-verify under f."""
        cube = power_system(full_shift, 3)
        rng = np.random.default_rng(7)
        for _ in range(20):
            targets = full_shift.sample_points(rng, 3)
            cert = search_tracing_point(cube, targets, n=5, delta1=1.0, delta2=0.0, epsilon=0.0625)
            lifted = lift_power_tracing(full_shift, 3, cert, gamma=0.0625, remainder=1, epsilon=0.5, delta1=1.0)
            assert verify_certificate(full_shift, lifted).valid

    def test_lift_horizon_too_short(self, full_shift, cube_certificate):
        """Short blocks cannot absorb the doubled mistake fraction."""
        with pytest.raises(HorizonTooShort):
            lift_power_tracing(full_shift, 3, cube_certificate, gamma=0.0625, remainder=1, epsilon=0.5, delta1=0.25)

    def test_lift_gap_bound(self, full_shift):
        """Input gaps too wide for 1 + delta1 * n after lifting are refused."""
        instance = TracingInstance(
            targets=(ZERO, ZERO), schedule=GapSchedule(lengths=(5, 5), gaps=(5,)), delta=0.0, epsilon=0.0625,
        )
        wide = TracingCertificate(ZERO, instance, (0, 0), instance.schedule.horizon, "pool")
        with pytest.raises(InvalidParams, match="exceeds the bound 14"):
            lift_power_tracing(full_shift, 3, wide, gamma=0.0625, remainder=1, epsilon=0.5, delta1=1.0)

    def test_identity_lift(self, full_shift):
        """Power 1 with remainder 0 returns the certificate itself."""
        cert = search_tracing_point(full_shift, [ZERO, ONE], n=5, delta1=1.0, delta2=0.0, epsilon=0.0625)
        assert lift_power_tracing(full_shift, 1, cert, gamma=0.0625, remainder=0, epsilon=0.5, delta1=1.0) is cert

    def test_invalid_remainder(self, full_shift, cube_certificate):
        """Remainders lie in 0..N-1."""
        with pytest.raises(InvalidParams):
            lift_power_tracing(full_shift, 3, cube_certificate, gamma=0.0625, remainder=3, epsilon=0.5, delta1=1.0)

    def test_modulus(self, full_shift):
        """Agreement on three symbols keeps two iterates within 1/2; on one symbol it does not."""
        assert modulus_holds(full_shift, 2, 0.125, 0.5)
        assert not modulus_holds(full_shift, 2, 0.5, 0.5)


class TestPeriodicTracer:
    """Test cases for periodic exact tracers."""

    def test_full_shift_spacing(self, full_shift):
        """0^4 and 1^4 at scale 1/4 need one free step between blocks."""
        found = find_periodic_exact_tracer(full_shift, [ZERO, ONE], [4, 4], epsilon=0.25)
        assert found is not None
        spacing, cert = found
        assert spacing == 1
        assert cert.tracer == SymbolicPoint.periodic("0000011111")
        assert cert.mistakes == (0, 0)

    def test_golden_mean_spacing(self, golden_mean):
        """Alternating targets out of phase need one free step."""
        targets = [SymbolicPoint.periodic("10"), SymbolicPoint.periodic("01")]
        spacing, cert = find_periodic_exact_tracer(golden_mean, targets, [4, 4], epsilon=0.25)
        assert spacing == 1
        assert verify_certificate(golden_mean, cert).valid

    def test_overlapping_blocks_must_agree(self, full_shift):
        """Spacing 0 fails when consecutive words disagree on the overlap."""
        assert periodic_exact_tracer(full_shift, [ZERO, ONE], [4, 4], epsilon=0.25, spacing=0) is None

    def test_mismatched_lengths(self, full_shift):
        """One length per target."""
        with pytest.raises(InvalidParams):
            periodic_exact_tracer(full_shift, [ZERO, ONE], [4], epsilon=0.25, spacing=1)
