"""Test fixtures for doctests only"""
import numpy as np
import pytest

from tilthex.hexarotor import Hexarotor
from tilthex.methods.force_polytope import contains_ball, section_at_height
from tilthex.methods.platform_model import ActuatorState, BodyWrench, RigidBodyState
from tilthex.methods.pose_controller import (
    ControllerRefs,
    ControllerState,
    Gains,
    PoseErrors,
)
from tilthex.params import PlatformParams


@pytest.fixture(scope="session", autouse=True)
def add_doctest_objects(doctest_namespace):
    """Add the case-study hexarotor and common types to the doctest_namespace"""
    doctest_namespace["np"] = np
    doctest_namespace["hexa"] = Hexarotor()
    doctest_namespace["Hexarotor"] = Hexarotor
    doctest_namespace["PlatformParams"] = PlatformParams
    doctest_namespace["RigidBodyState"] = RigidBodyState
    doctest_namespace["ActuatorState"] = ActuatorState
    doctest_namespace["BodyWrench"] = BodyWrench
    doctest_namespace["ControllerRefs"] = ControllerRefs
    doctest_namespace["ControllerState"] = ControllerState
    doctest_namespace["Gains"] = Gains
    doctest_namespace["PoseErrors"] = PoseErrors
    doctest_namespace["contains_ball"] = contains_ball
    doctest_namespace["section_at_height"] = section_at_height
