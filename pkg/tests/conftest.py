"""Defines test fixtures for pytest unit-tests."""
import pathlib
from collections.abc import Callable

import pytest
import yaml

from ergolab.systems import DynamicalSystem, build_system, get_zoo_system


def zoo(name: str) -> DynamicalSystem:
    """Runtime system for a zoo name."""
    return build_system(get_zoo_system(name))


@pytest.fixture
def full_shift() -> DynamicalSystem:
    """Full shift on two symbols."""
    return zoo("full_shift(2)")


@pytest.fixture
def full_shift4() -> DynamicalSystem:
    """Full shift on four symbols."""
    return zoo("full_shift(4)")


@pytest.fixture
def golden_mean() -> DynamicalSystem:
    """Subshift forbidding 11."""
    return zoo("golden_mean_sft")


@pytest.fixture
def density_zero() -> DynamicalSystem:
    """Orbit closure of the sequence with ones at the powers of two."""
    return zoo("density_zero_subshift")


@pytest.fixture
def rotation() -> DynamicalSystem:
    """Golden-angle circle rotation."""
    return zoo("rotation")


@pytest.fixture
def tent() -> DynamicalSystem:
    """Tent map on [0, 1]."""
    return zoo("tent_map")


@pytest.fixture
def halving() -> DynamicalSystem:
    """x -> x/2 on [0, 1]."""
    return zoo("halving_map")


@pytest.fixture
def write_config(tmp_path: pathlib.Path) -> Callable[[dict], pathlib.Path]:
    """Returns a helper that writes a YAML config into a temporary directory."""
    def _write(data: dict, name: str = "config.yaml") -> pathlib.Path:
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path
    return _write
