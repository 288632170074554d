"""Tests for system specifications, runtime maps, points and the zoo."""

from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from ergolab.errors import IllegalPoint, InvalidParams, InvalidSystem, NonPositiveRadius, UnknownSystem, UnsupportedSystem
from ergolab.systems import (
    IntervalSystem,
    OrbitClosureShift,
    Rotation,
    SubshiftOfFiniteType,
    SymbolicPoint,
    TestFunctionFamily,
    build_system,
    bump_function,
    decode_point,
    default_family,
    density_zero_word,
    dist,
    dump_system_spec,
    encode_point,
    get_zoo_system,
    harmonic_function,
    orbit_segment,
    parse_system_spec,
    power_system,
    resolve_system,
    step,
    zoo_catalog,
)
from ergolab.systems.zoo import interval_map


class TestZoo:
    """Test cases for the named example systems."""

    def test_catalog_names(self):
        """Every catalog entry resolves to a buildable system."""
        names = [entry.name for entry in zoo_catalog()]
        assert names == [
            "full_shift", "golden_mean_sft", "density_zero_subshift", "rotation",
            "tent_map", "halving_map", "logistic",
        ]
        for name in names:
            assert build_system(get_zoo_system(name)).name

    def test_parametrized_names(self):
        """Arguments in parentheses are passed to the constructor."""
        assert get_zoo_system("full_shift(4)").params.alphabet_size == 4
        assert get_zoo_system("logistic(2.5)").name == "logistic(2.5)"
        assert isinstance(build_system(get_zoo_system("rotation(1/3)")), Rotation)

    def test_runtime_classes(self, full_shift, golden_mean, density_zero, rotation, tent):
        """Zoo systems build the expected runtime classes."""
        assert isinstance(full_shift, SubshiftOfFiniteType)
        assert isinstance(golden_mean, SubshiftOfFiniteType)
        assert isinstance(density_zero, OrbitClosureShift)
        assert isinstance(rotation, Rotation)
        assert isinstance(tent, IntervalSystem)

    def test_unknown_name(self):
        """Unknown names list the available systems."""
        with pytest.raises(UnknownSystem, match="Available"):
            get_zoo_system("baker_map")

    def test_argument_to_parameterless_system(self):
        """Systems without a parameter reject arguments."""
        with pytest.raises(UnknownSystem, match="takes no argument"):
            get_zoo_system("golden_mean_sft(3)")

    def test_bad_argument(self):
        """Unparsable arguments are reported as unknown systems."""
        with pytest.raises(UnknownSystem, match="Bad argument"):
            get_zoo_system("full_shift(two)")

    def test_resolve_accepts_mapping(self):
        """Inline mappings are validated into specifications."""
        spec = resolve_system({"kind": "sft", "params": {"forbidden": ["11"]}})
        assert build_system(spec).count_words(5) == 13

    def test_golden_angle_is_irrational_approximation(self, rotation):
        """The default angle is a Fibonacci ratio close to (sqrt 5 - 1)/2."""
        assert rotation.angle.denominator >= 10**12
        assert float(rotation.angle) == pytest.approx((5 ** 0.5 - 1) / 2, abs=1e-12)


class TestSpecifications:
    """Test cases for specification validation."""

    def test_sft_rejects_both_presentations(self):
        """Forbidden words and a transition matrix are mutually exclusive."""
        with pytest.raises(ValidationError, match="not both"):
            parse_system_spec({
                "kind": "sft",
                "params": {"forbidden": ["11"], "transition": [[1, 1], [1, 0]]},
            })

    def test_sft_rejects_foreign_symbols(self):
        """Forbidden words must use the alphabet."""
        with pytest.raises(ValidationError, match="outside the alphabet"):
            parse_system_spec({"kind": "sft", "params": {"alphabet_size": 2, "forbidden": ["12"]}})

    def test_sft_rejects_zero_row(self):
        """A transition matrix with a dead symbol is invalid."""
        with pytest.raises(ValidationError, match="all-zero row"):
            parse_system_spec({"kind": "sft", "params": {"transition": [[1, 1], [0, 0]]}})

    def test_empty_sft(self):
        """A subshift whose graph has no cycles is empty."""
        spec = parse_system_spec({"kind": "sft", "params": {"forbidden": ["00", "01", "10", "11"]}})
        with pytest.raises(InvalidSystem, match="empty"):
            build_system(spec)

    def test_rotation_angle_normalized(self):
        """Angles are stored as reduced fractions mod 1."""
        spec = parse_system_spec({"kind": "rotation", "params": {"alpha": "5/4"}})
        assert spec.params.alpha == "1/4"
        assert dump_system_spec(spec)["params"]["alpha"] == "1/4"

    def test_interval_pieces_must_cover(self):
        """The last piece ends at the upper endpoint."""
        with pytest.raises(ValidationError, match="upper endpoint"):
            parse_system_spec({
                "kind": "interval_map",
                "params": {"pieces": [{"upper": 0.5, "formula": "x"}]},
            })

    def test_interval_map_must_be_self_map(self):
        """Maps leaving their interval are rejected at build time."""
        with pytest.raises(InvalidSystem, match="into itself"):
            build_system(interval_map("2*x", name="doubling"))

    def test_interval_map_formula_variable(self):
        """Formulas may only mention x."""
        with pytest.raises(InvalidSystem, match="variable x"):
            build_system(interval_map("x*y", name="bad"))

    def test_piecewise_map(self):
        """Breakpoints select the branch."""
        spec = parse_system_spec({
            "kind": "interval_map",
            "params": {"pieces": [{"upper": 0.5, "formula": "2*x"}, {"upper": 1.0, "formula": "2 - 2*x"}]},
        })
        sys = build_system(spec)
        assert step(sys, 0.25) == pytest.approx(0.5)
        assert step(sys, 0.75) == pytest.approx(0.5)

    def test_product_system(self):
        """Products use the max metric."""
        spec = parse_system_spec({
            "kind": "product",
            "params": {"factors": [
                {"kind": "rotation", "params": {"alpha": "1/3"}},
                {"kind": "full_shift", "params": {"alphabet_size": 2}},
            ]},
        })
        sys = build_system(spec)
        x = (Fraction(0), SymbolicPoint.periodic("0"))
        y = (Fraction(1, 10), SymbolicPoint.eventually_periodic("0", "1"))
        assert dist(sys, x, y) == pytest.approx(0.5)


class TestMetrics:
    """Test cases for distances and single steps."""

    def test_symbolic_distance(self, full_shift):
        """Distance is base to the minus first disagreement index."""
        x = SymbolicPoint.eventually_periodic("0110", "0")
        y = SymbolicPoint.eventually_periodic("0100", "0")
        assert dist(full_shift, x, y) == 0.25
        assert dist(full_shift, x, x) == 0.0

    def test_symbolic_metric_base(self):
        """A configured base overrides the alphabet size."""
        sys = build_system(parse_system_spec({
            "kind": "full_shift", "params": {"alphabet_size": 2}, "metric": {"base": 3},
        }))
        x = SymbolicPoint.eventually_periodic("01", "0")
        y = SymbolicPoint.eventually_periodic("00", "0")
        assert dist(sys, x, y) == pytest.approx(1 / 3)

    def test_agreement_length(self, full_shift):
        """J(eps) is the smallest J with 2^-J <= eps."""
        assert full_shift.agreement_length(0.25) == 2
        assert full_shift.agreement_length(0.3) == 2
        assert full_shift.agreement_length(1.0) == 0

    def test_circle_distance(self, rotation):
        """Distance on the circle wraps around."""
        assert dist(rotation, 0.05, 0.95) == pytest.approx(0.1)
        assert rotation.diameter == 0.5

    def test_rotation_is_exact(self):
        """Orbits of rational points stay rational."""
        sys = build_system(get_zoo_system("rotation(1/3)"))
        segment = orbit_segment(sys, Fraction(0), 4)
        assert list(segment.states) == [Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(0)]

    def test_interval_step(self, tent, halving):
        """Interval maps evaluate their formula."""
        assert step(tent, 0.25) == pytest.approx(0.5)
        assert step(halving, 0.5) == pytest.approx(0.25)

    def test_trajectory_distances_match_pointwise(self, full_shift):
        """Bulk distances agree with distances of iterates."""
        x = SymbolicPoint.eventually_periodic("0011010", "01")
        y = SymbolicPoint.eventually_periodic("1011", "0")
        a, b = full_shift.trajectory(x, 12), full_shift.trajectory(y, 12)
        bulk = full_shift.trajectory_distances(a, 1, b, 0, 8)
        expected = [full_shift.distance(x.shifted(1 + t), y.shifted(t)) for t in range(8)]
        np.testing.assert_allclose(bulk, expected)

    def test_power_system_steps(self, full_shift):
        """f^N moves N symbols at a time."""
        cube = power_system(full_shift, 3)
        x = SymbolicPoint.eventually_periodic("0001", "0")
        assert cube.step(x).prefix == (1,)
        assert cube.name == "full_shift(2)^3"

    def test_power_must_be_positive(self, full_shift):
        """Powers start at 1."""
        with pytest.raises(InvalidParams):
            power_system(full_shift, 0)


class TestPoints:
    """Test cases for points and their validation."""

    def test_density_zero_word(self):
        """Ones sit exactly at the powers of two."""
        assert density_zero_word(0, 9).tolist() == [0, 1, 1, 0, 1, 0, 0, 0, 1]
        assert density_zero_word(5, 4).tolist() == [0, 0, 0, 1]

    def test_point_needs_one_extension(self):
        """A point has either a periodic tail or a generator."""
        with pytest.raises(IllegalPoint):
            SymbolicPoint(prefix=(0, 1))

    def test_shift_into_generator(self):
        """Shifting past the prefix advances the generator offset."""
        x = SymbolicPoint(prefix=(1,), generator="density_zero", offset=3)
        assert x.shifted(2) == SymbolicPoint(generator="density_zero", offset=4)

    def test_illegal_symbolic_point(self, golden_mean, full_shift):
        """Forbidden words and foreign symbols are rejected."""
        with pytest.raises(IllegalPoint, match="not allowed"):
            step(golden_mean, SymbolicPoint.periodic("011"))
        with pytest.raises(IllegalPoint, match="alphabet"):
            step(full_shift, SymbolicPoint.periodic("2"))

    def test_illegal_real_points(self, rotation, tent):
        """Real points must lie in the phase space."""
        with pytest.raises(IllegalPoint):
            step(rotation, 1.0)
        with pytest.raises(IllegalPoint):
            step(tent, 1.5)

    def test_orbit_segment_length(self, full_shift):
        """Orbit segments have at least one state."""
        with pytest.raises(InvalidParams):
            orbit_segment(full_shift, SymbolicPoint.periodic("0"), 0)
        segment = orbit_segment(full_shift, SymbolicPoint.periodic("01"), 3)
        assert segment.length == 3
        assert segment[1] == SymbolicPoint.periodic("10")

    def test_encode_examples(self):
        """Points encode to compact JSON values."""
        assert encode_point(SymbolicPoint.eventually_periodic("01", "0")) == {"prefix": "01", "tail": "0"}
        assert encode_point(Fraction(1, 3)) == "1/3"
        assert encode_point((0.25, Fraction(1, 2))) == [0.25, "1/2"]

    def test_decode_validates(self, golden_mean, density_zero):
        """Decoding checks membership in the phase space."""
        assert decode_point(density_zero, {"prefix": "", "generator": "density_zero", "offset": 5}) == (
            SymbolicPoint.from_generator("density_zero", 5)
        )
        with pytest.raises(IllegalPoint):
            decode_point(golden_mean, {"prefix": "", "tail": "1"})
        with pytest.raises(IllegalPoint):
            decode_point(golden_mean, "0101")


class TestLanguages:
    """Test cases for word counts and landmarks."""

    def test_golden_mean_counts(self, golden_mean):
        """Legal words are counted by the Fibonacci numbers."""
        assert [golden_mean.count_words(n) for n in range(1, 6)] == [2, 3, 5, 8, 13]
        assert golden_mean.count_words(7) == 34

    def test_full_shift_counts(self, full_shift4):
        """The full shift has k^n words."""
        assert [full_shift4.count_words(n) for n in range(1, 5)] == [4, 16, 64, 256]

    def test_density_zero_counts(self, density_zero):
        """The density-zero subshift has few words."""
        assert density_zero.count_words(1) == 2
        assert density_zero.count_words(2) == 4
        assert density_zero.is_legal_word((0, 1, 1, 0))
        assert not density_zero.is_legal_word((1, 1, 1))

    def test_sft_fixed_points(self, golden_mean, full_shift):
        """Fixed points are the self-loops of the transition graph."""
        assert golden_mean.fixed_points() == [SymbolicPoint.periodic((0,))]
        assert len(full_shift.fixed_points()) == 2

    def test_connecting_symbols(self, golden_mean):
        """Connectors avoid forbidden words."""
        connector = golden_mean.connecting_symbols((0, 1), (1, 0))
        assert connector == (0,)
        assert golden_mean.is_legal_word((0, 1) + connector + (1, 0))

    def test_point_with_prefix(self, golden_mean):
        """Legal prefixes extend to legal points."""
        point = golden_mean.point_with_prefix((1, 0, 1))
        assert point.word(3).tolist() == [1, 0, 1]
        assert golden_mean.coerce(point) == point

    def test_rotation_landmarks(self, rotation):
        """Rotations use the dyadic quarter points."""
        assert rotation.landmarks() == [Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)]
        assert rotation.fixed_points() == []

    def test_orbit_closure_landmarks(self, density_zero):
        """Landmarks include the generator and the zero sequence."""
        marks = density_zero.landmarks()
        assert marks[0] == SymbolicPoint.periodic((0,))
        assert marks[1] == density_zero.generator_point(0)


class TestFunctions:
    """Test cases for test functions."""

    def test_bump_values(self, full_shift):
        """Bumps are 1 on the inner ball and 0 far away."""
        bump = bump_function(full_shift, SymbolicPoint.periodic("0"), 0.25)
        assert bump.evaluate(full_shift, SymbolicPoint.periodic("0")) == 1.0
        assert bump.evaluate(full_shift, SymbolicPoint.periodic("1")) == 0.0
        assert bump.lipschitz == 4.0

    def test_bump_radius_positive(self, full_shift):
        """Radii must be positive."""
        with pytest.raises(NonPositiveRadius):
            bump_function(full_shift, SymbolicPoint.periodic("0"), 0.0)

    def test_harmonics_need_coordinates(self, full_shift, rotation):
        """Harmonics exist on circles and intervals only."""
        with pytest.raises(UnsupportedSystem):
            harmonic_function(full_shift, 1)
        assert harmonic_function(rotation, 1).evaluate(rotation, Fraction(1, 2)) == pytest.approx(-1.0)

    def test_default_family(self, rotation, full_shift):
        """Families carry bumps and, on circles, harmonics."""
        assert len(default_family(rotation)) == 12
        family = default_family(full_shift)
        assert len(family) == 8
        assert family.weights[:2].tolist() == [0.5, 0.25]

    def test_family_size(self, full_shift):
        """Families need at least four functions."""
        bump = bump_function(full_shift, SymbolicPoint.periodic("0"), 0.5)
        with pytest.raises(InvalidParams):
            TestFunctionFamily(system=full_shift.name, functions=(bump,) * 3)
