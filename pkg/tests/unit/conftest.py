"""Test fixtures for unit tests only"""
import numpy as np
import pytest

from tilthex import Hexarotor, PlatformParams
from tilthex.methods.force_polytope import PolytopeLUT


@pytest.fixture(scope="session")
def hexa() -> Hexarotor:
    """Case-study hexarotor"""
    return Hexarotor()


@pytest.fixture(scope="session")
def heavy_hexa() -> Hexarotor:
    """Hexarotor of the wall-inspection task"""
    return Hexarotor(PlatformParams.wall_platform())


@pytest.fixture(scope="session")
def lut(hexa) -> PolytopeLUT:
    """Polytope table on the 1 degree grid, built once per session"""
    return hexa.lut


@pytest.fixture(scope="session")
def hover_force(hexa) -> np.ndarray:
    """Force balancing gravity, body frame"""
    return np.array([0.0, 0.0, hexa.params.weight])


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh seeded generator for every test"""
    return np.random.Generator(np.random.Philox(1234))
