"""Test fixtures for integration tests only"""
# pylint: disable=redefined-outer-name
import os

import pytest

from tilthex.harness.scenario import ScenarioConfig
from tilthex.harness.sensors import SensorModels
from tilthex.harness.simulation import build_hexarotor
from tilthex.hexarotor import Hexarotor

RUN_INTEGRATION = os.getenv("TILTHEX_INTEGRATION")


def pytest_collection_modifyitems(config, items):
    """Closed-loop runs take minutes, they only run on request"""
    if RUN_INTEGRATION:
        return
    skip = pytest.mark.skip(reason="set TILTHEX_INTEGRATION=1 to fly closed loops")
    for item in items:
        if "integration" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="module")
def hover_scenario() -> ScenarioConfig:
    return ScenarioConfig.hover(sensors=SensorModels.noise_free(), duration=25.0)


@pytest.fixture(scope="module")
def wall_scenario() -> ScenarioConfig:
    return ScenarioConfig.wall_inspection()


@pytest.fixture(scope="module")
def flight_hexa(hover_scenario) -> Hexarotor:
    hexa = build_hexarotor(hover_scenario)
    assert len(hexa.lut) == 120
    return hexa


@pytest.fixture(scope="module")
def wall_hexa(wall_scenario) -> Hexarotor:
    return build_hexarotor(wall_scenario)
