"""Configuration module for ergolab."""

from .loader import config_digest, expand_env_vars, load_config, parse_config, read_config
from .models import ExperimentConfig

__all__ = ["ExperimentConfig", "config_digest", "expand_env_vars", "load_config", "parse_config", "read_config"]
