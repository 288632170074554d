"""Tests for report serialization and the ordered worker pool."""

import json
import math
import os
from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from ergolab.parallel import first_ordered, map_ordered, worker_count
from ergolab.reports import dump_json, to_jsonable, write_csv, write_report
from ergolab.systems import SymbolicPoint
from ergolab.tracing import search_tracing


class TestJsonable:
    """Test cases for converting records to plain JSON data."""

    def test_points_and_numbers(self):
        """Points are encoded and numpy values become builtins."""
        data = to_jsonable({
            "point": SymbolicPoint.eventually_periodic("01", "0"),
            "angle": Fraction(1, 3),
            "array": np.array([1, 2]),
            "flag": np.bool_(True),
            "gap": float("inf"),
            (1, 2): 0.5,
        })
        assert data == {
            "point": {"prefix": "01", "tail": "0"},
            "angle": "1/3",
            "array": [1, 2],
            "flag": True,
            "gap": "inf",
            "1,2": 0.5,
        }

    def test_nan_is_a_string(self):
        """JSON has no NaN."""
        assert to_jsonable(math.nan) == "nan"

    def test_certificates_are_rechecked(self, full_shift):
        """Embedded certificates carry a fresh verification flag."""
        outcome = search_tracing(full_shift, [SymbolicPoint.periodic("0")], 4, 0.25, 0.0, 0.25, blocks=2)
        data = to_jsonable(outcome.certificate, full_shift)
        assert data["verified"]
        assert data["system"]["kind"] == "full_shift"
        with pytest.raises(ValueError):
            to_jsonable(outcome.certificate)

    def test_dump_is_canonical(self):
        """Keys are sorted so equal data give equal text."""
        assert dump_json({"b": 1, "a": [1.5]}) == dump_json({"a": [1.5], "b": 1})
        assert dump_json({}).endswith("\n")


class TestWriting:
    """Test cases for report and table files."""

    def test_report_and_sidecar(self, tmp_path):
        """Timing goes to the sidecar, never into the report."""
        path = write_report(tmp_path / "run.json", {"verdict": "ok"}, {"seed": 1}, started=0.0)
        report = json.loads(path.read_text())
        assert report == {"provenance": {"seed": 1}, "result": {"verdict": "ok"}}
        meta = json.loads((tmp_path / "run.meta.json").read_text())
        assert meta["report"] == "run.json"
        assert "elapsed_seconds" in meta

    def test_csv(self, tmp_path):
        """Floats keep full precision."""
        path = write_csv(tmp_path / "t.csv", ["n", "value"], [[1, 0.1], [2, 1 / 3]])
        assert path.read_text().splitlines() == ["n,value", "1,0.1", "2,0.3333333333333333"]


class TestParallel:
    """Test cases for the ordered worker pool."""

    def test_worker_count_from_env(self):
        """ERGOLAB_THREADS overrides the CPU count."""
        with patch.dict(os.environ, {"ERGOLAB_THREADS": "3"}):
            assert worker_count() == 3
        with patch.dict(os.environ, {"ERGOLAB_THREADS": "0"}), pytest.raises(ValueError):
            worker_count()
        with patch.dict(os.environ, {"ERGOLAB_THREADS": "many"}), pytest.raises(ValueError):
            worker_count()

    @pytest.mark.parametrize("threads", ["1", "4"])
    def test_first_ordered_is_deterministic(self, threads):
        """The earliest hit wins whatever the thread count."""
        with patch.dict(os.environ, {"ERGOLAB_THREADS": threads}):
            assert map_ordered(lambda x: x * x, range(5)) == [0, 1, 4, 9, 16]
            assert first_ordered(lambda x: x if x % 7 == 3 else None, list(range(50))) == (3, 3)
            assert first_ordered(lambda x: None, [1, 2, 3]) is None
