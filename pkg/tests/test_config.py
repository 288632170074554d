"""Tests for configuration module."""

import os
import pathlib
from unittest.mock import patch

import pytest

from ergolab.config import config_digest, expand_env_vars, load_config, parse_config, read_config
from ergolab.errors import ConfigError


def test_expand_env_vars():
    """Test environment variable expansion."""
    with patch.dict(os.environ, {"ERGOLAB_TEST_VAR": "results"}):
        assert expand_env_vars("${ERGOLAB_TEST_VAR}") == "results"
        assert expand_env_vars("out/${ERGOLAB_TEST_VAR}/run") == "out/results/run"
        assert expand_env_vars("no_vars_here") == "no_vars_here"

    with pytest.raises(ConfigError, match="Environment variable 'ERGOLAB_MISSING_VAR' not found"):
        expand_env_vars("${ERGOLAB_MISSING_VAR}")


def test_load_config_basic(write_config):
    """Test basic config loading."""
    path = write_config({
        "experiment": "entropy",
        "system": "golden_mean_sft",
        "entropy": {"epsilons": [0.5], "n_values": [4, 6, 8]},
    })
    config = load_config(str(path))
    assert config.experiment == "entropy"
    assert config.system == "golden_mean_sft"
    assert config.entropy.n_values == [4, 6, 8]
    assert config.seed == 0
    assert config.budget == 256
    assert config.output.dir == "results"


def test_load_config_with_env_vars(write_config):
    """Test config loading with environment variables."""
    path = write_config({
        "experiment": "app",
        "system": "${ERGOLAB_TEST_SYSTEM}",
        "output": {"dir": "${ERGOLAB_TEST_OUT}"},
    })
    with patch.dict(os.environ, {"ERGOLAB_TEST_SYSTEM": "full_shift(3)", "ERGOLAB_TEST_OUT": "/tmp/ergolab"}):
        config = load_config(str(path))
    assert config.system == "full_shift(3)"
    assert config.output.dir == "/tmp/ergolab"


def test_load_config_json(tmp_path):
    """JSON files are read by the same loader."""
    path = tmp_path / "config.json"
    path.write_text('{"experiment": "spec", "system": "full_shift(2)", "spec": {"profiles": [[4, 4]]}}')
    config = load_config(str(path))
    assert config.spec.profiles == [[4, 4]]


def test_load_config_system_mapping(write_config):
    """Systems may be given as full specifications."""
    path = write_config({
        "experiment": "entropy",
        "system": {"kind": "sft", "params": {"alphabet_size": 2, "forbidden": ["11"]}},
    })
    assert load_config(str(path)).system["kind"] == "sft"


def test_load_config_missing_file():
    """Test loading a nonexistent config file."""
    with pytest.raises(FileNotFoundError, match="Configuration file not found"):
        load_config("/nonexistent/config.yaml")


def test_load_config_empty_file(tmp_path):
    """Test loading an empty config file."""
    path = tmp_path / "empty.yaml"
    path.write_text("")
    with pytest.raises(ValueError, match="Configuration file is empty"):
        load_config(str(path))


def test_load_config_invalid_yaml(tmp_path):
    """Unparseable files raise a configuration error."""
    path = tmp_path / "broken.yaml"
    path.write_text("experiment: [entropy\n")
    with pytest.raises(ConfigError, match="Could not parse"):
        read_config(str(path))


def test_load_config_not_a_mapping(tmp_path):
    """The top level must be a mapping."""
    path = tmp_path / "list.yaml"
    path.write_text("- entropy\n- trace\n")
    with pytest.raises(ConfigError, match="must be a mapping"):
        read_config(str(path))


class TestValidation:
    """Test cases for field validation and error paths."""

    def test_error_names_field_path(self):
        """The first offending field is reported as a dotted path."""
        with pytest.raises(ConfigError) as info:
            parse_config({"experiment": "app", "system": "full_shift(2)", "app": {"grid": {
                "delta1": [0.25], "delta2": [0.1], "epsilon": [-0.25], "n": [16],
            }}})
        assert info.value.path == "app.grid.epsilon"

    def test_unknown_experiment(self):
        """Experiments outside the known kinds are rejected."""
        with pytest.raises(ConfigError) as info:
            parse_config({"experiment": "mixing", "system": "full_shift(2)"})
        assert info.value.path == "experiment"

    def test_system_required(self):
        """Every experiment but certificate verification needs a system."""
        with pytest.raises(ConfigError, match="needs a system"):
            parse_config({"experiment": "trace"})

    def test_certificate_required(self):
        """Verification needs a certificate path instead."""
        with pytest.raises(ConfigError, match="needs a certificate"):
            parse_config({"experiment": "trace-verify"})
        assert parse_config({"experiment": "trace-verify", "certificate": "cert.json"}).system is None

    @pytest.mark.parametrize(("section", "values"), [
        ("entropy", {"n_values": [4, 8]}),
        ("trace", {"delta2": 1.5}),
        ("trace", {"power": 0}),
        ("unique_ergodicity", {"start_count": 4}),
        ("family", {"delta": 0.1}),
    ])
    def test_out_of_range(self, section, values):
        """Parameters outside their documented ranges are rejected."""
        with pytest.raises(ConfigError) as info:
            parse_config({"experiment": "entropy", "system": "full_shift(2)", section: values})
        assert info.value.path.startswith(section)

    def test_dichotomy_defaults(self):
        """The dichotomy fits entropy over 32 to 256."""
        config = parse_config({"experiment": "dichotomy", "system": "density_zero_subshift"})
        assert config.dichotomy.entropy.n_values == [32, 64, 128, 256]
        assert config.dichotomy.app.grid.n == [64, 128]


class TestDigest:
    """Test cases for the configuration digest."""

    def test_equal_configs(self):
        """Configs that validate to the same model share a digest."""
        a = parse_config({"experiment": "entropy", "system": "full_shift(2)"})
        b = parse_config({"experiment": "entropy", "system": "full_shift(2)", "seed": 0, "budget": 256})
        assert config_digest(a) == config_digest(b)
        assert len(config_digest(a)) == 64

    def test_seed_changes_digest(self):
        """Any changed field changes the digest."""
        a = parse_config({"experiment": "entropy", "system": "full_shift(2)"})
        b = parse_config({"experiment": "entropy", "system": "full_shift(2)", "seed": 1})
        assert config_digest(a) != config_digest(b)


@pytest.mark.parametrize("path", sorted((pathlib.Path(__file__).parent / "fixtures" / "configs").glob("*.yaml")))
def test_fixture_configs_validate(path):
    """Every bundled example configuration validates."""
    config = load_config(str(path))
    assert config.system is not None
