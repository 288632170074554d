"""Tests for interval-map fixed points, attraction and the zero-entropy classifier."""

import math

import pytest

from ergolab.errors import UnsupportedSystem
from ergolab.interval import (
    ClassifierSettings,
    check_fnxgex,
    classify_zero_entropy_app,
    find_fixed_points,
    find_periodic_points,
    is_attracting,
)

from .conftest import zoo

FAST = ClassifierSettings(lap_n=8, lap_resolution=2**12, app_n=128, cluster_length=500, fnxgex_n=32)


@pytest.fixture
def logistic():
    return zoo("logistic(2.5)")


class TestFixedPoints:
    """Test cases for fixed and periodic point brackets."""

    def test_halving(self, halving):
        """x/2 fixes only the origin."""
        records = find_fixed_points(halving)
        assert len(records) == 1
        assert records[0].location == 0.0
        assert records[0].status == "isolated"

    def test_tent(self, tent):
        """The tent map fixes 0 and 2/3."""
        locations = [r.location for r in find_fixed_points(tent)]
        assert locations == pytest.approx([0.0, 2 / 3], abs=1e-6)

    def test_logistic(self, logistic):
        """The logistic map at r = 2.5 fixes 0 and 0.6."""
        locations = [r.location for r in find_fixed_points(logistic)]
        assert locations == pytest.approx([0.0, 0.6], abs=1e-6)

    def test_brackets_hold_a_sign_change(self, tent):
        """Bracket values never share a strict sign."""
        for record in find_fixed_points(tent):
            lo, hi = record.values
            assert not (lo > 0 and hi > 0) and not (lo < 0 and hi < 0)
            assert record.bracket[0] <= record.location <= record.bracket[1]

    def test_tent_period_two(self, tent):
        """Points of least period 2 exclude the fixed points."""
        locations = [r.location for r in find_periodic_points(tent, 2)]
        assert locations == pytest.approx([0.4, 0.8], abs=1e-6)

    def test_halving_has_no_cycles(self, halving):
        """Iterates of x/2 only fix the origin again."""
        assert find_periodic_points(halving, 3) == []

    def test_requires_interval_map(self, full_shift):
        """Symbolic systems are rejected."""
        with pytest.raises(UnsupportedSystem):
            find_fixed_points(full_shift)


class TestAttraction:
    """Test cases for basin sampling."""

    def test_halving_attracts(self, halving):
        """Every orbit of x/2 falls to 0."""
        attraction = is_attracting(halving, 0.0, [0.0, 0.5, 1.0])
        assert attraction.verdict == "attracting-on-samples"
        assert all(s.converged for s in attraction.samples)

    def test_logistic_attracts_interior(self, logistic):
        """Interior orbits of the logistic map converge to 0.6."""
        assert is_attracting(logistic, 0.6, [0.1, 0.5, 0.9]).verdict == "attracting-on-samples"

    def test_tent_repels(self, tent):
        """Tent orbits stay away from 2/3."""
        assert is_attracting(tent, 2 / 3, [0.1, 0.3]).verdict == "not-attracting"


class TestFnxgex:
    """Test cases for the rise-below, fall-above check."""

    def test_halving(self, halving):
        """Orbits above the origin keep falling; the fixed point itself is skipped."""
        report = check_fnxgex(halving, 0.0, [0.0, 0.25, 0.5, 1.0], 16)
        assert report.hypothesis_ok
        assert report.violations == []
        assert report.checked == 3

    def test_other_periodic_points(self, tent):
        """Extra periodic points void the hypothesis."""
        report = check_fnxgex(tent, 0.0, [0.5], 8, period_bound=2)
        assert not report.hypothesis_ok
        assert report.checked == 0
        assert report.other_periodic[0] == (1, pytest.approx(2 / 3, abs=1e-6))


class TestClassifier:
    """Test cases for the attracting-fixed-point characterization."""

    def test_halving_satisfied(self, halving):
        """x/2 has one attracting fixed point, zero entropy and one measure."""
        record = classify_zero_entropy_app(halving, FAST)
        assert record.satisfied
        assert record.verdict == "characterization satisfied"
        assert record.entropy_slope == 0.0
        assert record.app_passed
        assert len(record.clusters) == 1
        assert record.fnxgex.hypothesis_ok

    def test_tent_fails(self, tent):
        """Two fixed points and a period-2 orbit break the characterization."""
        record = classify_zero_entropy_app(tent, FAST)
        assert not record.satisfied
        assert record.verdict == "characterization fails"
        assert any("fixed point records" in reason for reason in record.reasons)
        assert any("period 2" in reason for reason in record.reasons)
        assert record.entropy_slope == pytest.approx(math.log(2))
        assert record.fnxgex is None

    def test_logistic_fails(self, logistic):
        """A repelling origin next to the attracting point is a second fixed point."""
        record = classify_zero_entropy_app(logistic, FAST)
        assert not record.satisfied
        assert record.reasons[0].startswith("2 fixed point records")

    def test_requires_interval_map(self, rotation):
        """Rotations are not classified."""
        with pytest.raises(UnsupportedSystem):
            classify_zero_entropy_app(rotation)
