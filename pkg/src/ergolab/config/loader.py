"""Configuration loader for ergolab."""

import hashlib
import json
import os
import re
from typing import Any

import yaml
from pydantic import ValidationError

from ..errors import ConfigError
from .models import ExperimentConfig


def expand_env_vars(value: str) -> str:
    """
    Expand environment variables in configuration values.

    Args:
        value: String that may contain environment variable references

    Returns:
        String with environment variables expanded

    Raises:
        ConfigError: If an environment variable is not set
    """
    if not isinstance(value, str):
        return value

    pattern = r'\$\{([^}]+)\}'
    for match in re.findall(pattern, value):
        env_var = match.strip()
        if env_var not in os.environ:
            raise ConfigError("", f"Environment variable '{env_var}' not found")
        value = value.replace(f"${{{match}}}", os.environ[env_var])
    return value


def _expand_env_vars_recursive(obj: object) -> object:
    """Recursively expand environment variables in nested structures."""
    if isinstance(obj, dict):
        return {key: _expand_env_vars_recursive(value) for key, value in obj.items()}
    if isinstance(obj, list):
        return [_expand_env_vars_recursive(item) for item in obj]
    if isinstance(obj, str):
        return expand_env_vars(obj)
    return obj


def _error_path(error: dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"])


def parse_config(raw_config: dict[str, Any]) -> ExperimentConfig:
    """
    Validate an already-parsed configuration mapping.

    Raises:
        ConfigError: Naming the dotted path of the first offending field.
    """
    if not isinstance(raw_config, dict):
        raise ConfigError("", "Configuration must be a mapping")
    processed_config = _expand_env_vars_recursive(raw_config)
    try:
        return ExperimentConfig(**processed_config)  # type: ignore[arg-type]
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(_error_path(first), first["msg"]) from e


def read_config(config_path: str) -> dict[str, Any]:
    """
    Read a YAML or JSON configuration file without validating it.

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If the file is empty
        ConfigError: If the file cannot be parsed
    """
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, encoding='utf-8') as file:
        try:
            raw_config = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise ConfigError("", f"Could not parse {config_path}: {e}") from e

    if raw_config is None:
        raise ValueError("Configuration file is empty")
    if not isinstance(raw_config, dict):
        raise ConfigError("", "Configuration must be a mapping")
    return raw_config


def load_config(config_path: str) -> ExperimentConfig:
    """
    Load configuration from a YAML or JSON file.

    Args:
        config_path: Path to the configuration file

    Returns:
        Validated configuration object

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If the file is empty
        ConfigError: If parsing or validation fails
    """
    return parse_config(read_config(config_path))


def config_digest(config: ExperimentConfig) -> str:
    """sha256 of the canonical JSON form of a validated configuration."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
