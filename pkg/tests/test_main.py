"""Tests for the CLI main module."""

import json
import pathlib
from unittest.mock import patch

import pytest

from ergolab.__main__ import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, main

CONFIGS = pathlib.Path(__file__).parent / "fixtures" / "configs"

TRACE = {
    "experiment": "trace",
    "system": "full_shift(2)",
    "trace": {"n": 8, "blocks": 4, "delta2": 0.1, "epsilon": 0.25},
}


def run_cli(*argv: str) -> int:
    """Run the CLI and return its exit code."""
    with patch('sys.argv', ['ergolab', *argv]), pytest.raises(SystemExit) as exc_info:
        main()
    return exc_info.value.code


class TestMain:
    """Test cases for the main CLI function."""

    def test_main_help_option(self):
        """Test main function with help option."""
        assert run_cli('--help') == 0

    def test_main_unknown_experiment(self):
        """Unknown subcommands are rejected by the parser."""
        assert run_cli('mixing') == 2

    def test_main_nonexistent_config_file(self, capsys):
        """Test main function with nonexistent config file."""
        assert run_cli('entropy', '--config', '/nonexistent/config.yaml') == EXIT_CONFIG
        assert "Invalid configuration" in capsys.readouterr().err

    def test_main_invalid_config(self, write_config, tmp_path, capsys):
        """Out-of-range values exit with the configuration code and name the field."""
        path = write_config({"experiment": "trace", "system": "full_shift(2)", "trace": {"delta2": 2.0}})
        assert run_cli('trace', '--config', str(path), '--out', str(tmp_path)) == EXIT_CONFIG
        assert "trace.delta2" in capsys.readouterr().err

    def test_main_experiment_mismatch(self, write_config, tmp_path):
        """A config written for another experiment is refused."""
        path = write_config({"experiment": "entropy", "system": "full_shift(2)"})
        assert run_cli('trace', '--config', str(path), '--out', str(tmp_path)) == EXIT_CONFIG

    def test_main_unknown_system(self, write_config, tmp_path):
        """Zoo lookups that fail are configuration errors."""
        path = write_config({"experiment": "entropy", "system": "baker_map"})
        assert run_cli('entropy', '--config', str(path), '--out', str(tmp_path)) == EXIT_CONFIG

    def test_main_bad_start_point(self, write_config, tmp_path, capsys):
        """Encoded start points are validated against the system."""
        path = write_config({
            "experiment": "unique-ergodicity",
            "system": "rotation",
            "unique_ergodicity": {"starts": ["1/3", "3/2"], "n_values": [10, 100]},
        })
        assert run_cli('unique-ergodicity', '--config', str(path), '--out', str(tmp_path)) == EXIT_CONFIG
        assert "unique_ergodicity.starts" in capsys.readouterr().err

    def test_main_runtime_error(self, write_config, tmp_path):
        """Test main function handling runtime errors."""
        path = write_config({"experiment": "entropy", "system": "full_shift(2)"})
        with patch('ergolab.__main__.run', side_effect=RuntimeError("boom")), patch('sys.stderr'):
            assert run_cli('entropy', '--config', str(path)) == EXIT_FAILURE

    def test_main_keyboard_interrupt(self, write_config):
        """Test main function handling keyboard interrupt."""
        path = write_config({"experiment": "entropy", "system": "full_shift(2)"})
        with patch('ergolab.__main__.run', side_effect=KeyboardInterrupt()), patch('sys.stderr'):
            assert run_cli('entropy', '--config', str(path)) == EXIT_FAILURE


class TestRuns:
    """End-to-end runs writing reports."""

    def test_entropy_report(self, write_config, tmp_path, capsys):
        """The report holds provenance, the estimate and a CSV table."""
        path = write_config({
            "experiment": "entropy",
            "system": "full_shift(2)",
            "seed": 5,
            "entropy": {"epsilons": [0.5], "n_values": [4, 6, 8]},
        })
        assert run_cli('entropy', '--config', str(path), '--out', str(tmp_path)) == EXIT_OK
        report = json.loads((tmp_path / "entropy-full_shift_2.json").read_text())
        assert report["provenance"]["experiment"] == "entropy"
        assert report["provenance"]["seed"] == 5
        assert len(report["provenance"]["config_sha256"]) == 64
        assert report["result"]["system"] == "full_shift(2)"
        assert report["result"]["estimate"] == pytest.approx(0.6931, abs=1e-3)
        assert (tmp_path / "entropy-full_shift_2.entropy.csv").exists()
        assert (tmp_path / "entropy-full_shift_2.meta.json").exists()
        assert "entropy-full_shift_2.json" in capsys.readouterr().out

    def test_seed_override(self, write_config, tmp_path):
        """--seed replaces the configured seed."""
        path = write_config({
            "experiment": "entropy",
            "system": "full_shift(2)",
            "entropy": {"epsilons": [0.5], "n_values": [4, 6, 8]},
        })
        run_cli('entropy', '--config', str(path), '--out', str(tmp_path), '--seed', '11')
        report = json.loads((tmp_path / "entropy-full_shift_2.json").read_text())
        assert report["provenance"]["seed"] == 11

    def test_reports_are_reproducible(self, write_config, tmp_path):
        """Equal configs give byte-identical reports."""
        path = write_config(TRACE)
        first, second = tmp_path / "first", tmp_path / "second"
        run_cli('trace', '--config', str(path), '--out', str(first))
        run_cli('trace', '--config', str(path), '--out', str(second))
        for name in ("trace-full_shift_2.json", "trace-full_shift_2.blocks.csv", "trace-full_shift_2.certificate.json"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_trace_then_verify(self, write_config, tmp_path, capsys):
        """A written certificate re-verifies; a tampered one does not."""
        path = write_config(TRACE)
        assert run_cli('trace', '--config', str(path), '--out', str(tmp_path)) == EXIT_OK
        cert_path = tmp_path / "trace-full_shift_2.certificate.json"
        report = json.loads((tmp_path / "trace-full_shift_2.json").read_text())
        assert report["result"]["found"]
        assert report["result"]["certificate"]["verified"]

        verify_dir = tmp_path / "verify"
        assert run_cli('trace-verify', '--certificate', str(cert_path), '--out', str(verify_dir)) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("certificate valid")

        data = json.loads(cert_path.read_text())
        data["tracer"] = {"prefix": "", "tail": "1"}
        cert_path.write_text(json.dumps(data))
        assert run_cli('trace-verify', '--certificate', str(cert_path), '--out', str(verify_dir)) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("certificate invalid")
        report = json.loads((verify_dir / "trace-verify-full_shift_2.json").read_text())
        assert 1 in report["result"]["failing_blocks"]

    def test_verify_unreadable_certificate(self, tmp_path):
        """Certificates that are not JSON objects are configuration errors."""
        path = tmp_path / "cert.json"
        path.write_text("[1, 2]")
        assert run_cli('trace-verify', '--certificate', str(path), '--out', str(tmp_path)) == EXIT_CONFIG

    def test_spec_unsupported(self, write_config, tmp_path):
        """Unsupported systems still produce a report."""
        path = write_config({"experiment": "spec", "system": "rotation", "spec": {"profiles": [[4, 4]]}})
        assert run_cli('spec', '--config', str(path), '--out', str(tmp_path)) == EXIT_OK
        report = json.loads((tmp_path / "spec-rotation.json").read_text())
        assert not report["result"]["passed"]
        assert "unsupported" in report["result"]


class TestFixtureConfigs:
    """Runs of the bundled example configurations."""

    def test_family_build_and_verify(self, tmp_path, capsys):
        """A built family re-verifies from its saved file."""
        config = CONFIGS / "full_shift4_family.yaml"
        assert run_cli('family', '--config', str(config), '--out', str(tmp_path)) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("family valid")
        report = json.loads((tmp_path / "family-full_shift_4.json").read_text())
        assert report["result"]["members"] == 4
        assert report["result"]["separated"]

        family_path = tmp_path / "family-full_shift_4.family.json"
        assert run_cli('trace-verify', '--certificate', str(family_path), '--out', str(tmp_path / "verify")) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("family valid")

    def test_halving_classification(self, tmp_path):
        """The halving map satisfies the attracting-fixed-point characterization."""
        config = CONFIGS / "halving_classify.yaml"
        assert run_cli('interval-classify', '--config', str(config), '--out', str(tmp_path)) == EXIT_OK
        report = json.loads((tmp_path / "interval-classify-halving_map.json").read_text())
        assert report["result"]["verdict"] == "characterization satisfied"
        assert report["result"]["app_passed"]

    def test_classify_overrides(self, tmp_path):
        """--map, --period-bound and --samples replace the configured values."""
        config = CONFIGS / "halving_classify.yaml"
        code = run_cli(
            'interval-classify', '--config', str(config), '--out', str(tmp_path),
            '--map', 'x/2', '--period-bound', '3', '--samples', '16',
        )
        assert code == EXIT_OK
        report = json.loads((tmp_path / "interval-classify-x_2.json").read_text())
        assert report["result"]["verdict"] == "characterization satisfied"
        assert "up to period 3" in report["result"]["scope"]

    def test_classify_override_validation(self, tmp_path, capsys):
        """Overrides are validated and only apply to the classifier."""
        config = CONFIGS / "halving_classify.yaml"
        assert run_cli('interval-classify', '--config', str(config), '--period-bound', '0') == EXIT_CONFIG
        assert "interval.period_bound" in capsys.readouterr().err
        entropy = CONFIGS / "golden_mean_entropy.yaml"
        assert run_cli('entropy', '--config', str(entropy), '--map', 'tent_map', '--out', str(tmp_path)) == EXIT_CONFIG

    @pytest.mark.slow
    @pytest.mark.timeout(300)
    def test_density_zero_strict(self, tmp_path):
        """No strict tracer exists and the search says so exhaustively."""
        config = CONFIGS / "density_zero_sapp.yaml"
        assert run_cli('sapp', '--config', str(config), '--out', str(tmp_path)) == EXIT_OK
        report = json.loads((tmp_path / "sapp-density_zero_subshift.json").read_text())
        assert not report["result"]["passed"]
        assert [cell["outcome"] for cell in report["result"]["cells"]] == ["no-witness-at-budget"]
        assert report["result"]["cells"][0]["exhaustive"]
