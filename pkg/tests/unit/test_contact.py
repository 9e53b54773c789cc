#! /usr/bin/env python
"""Test suite for the wall contact and the scripted references"""
# pylint: disable=missing-function-docstring
import numpy as np
import pytest

from tilthex import ConfigError
from tilthex.geometry import rot_z
from tilthex.harness.contact import WallContact, contact_model, tool_tip, wall_force
from tilthex.harness.references import (
    HOVER_POSITION,
    ReferenceScript,
    Segment,
    min_jerk,
    takeoff_script,
    wall_script,
)
from tilthex.methods.platform_model import RigidBodyState


def test_no_force_in_free_space():
    wall = WallContact()

    force = wall_force(np.array([5.99, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), wall)

    assert force.tolist() == [0.0, 0.0, 0.0]


def test_spring_and_damper_push_back():
    wall = WallContact(K_e=1000.0, K_d=10.0)

    force = wall_force(np.array([6.01, 0.0, 1.0]), np.array([0.5, 0.0, 0.0]), wall)

    assert force == pytest.approx([-15.0, 0.0, 0.0])


def test_receding_tip_is_never_pulled():
    wall = WallContact(K_e=1000.0, K_d=1000.0)

    force = wall_force(np.array([6.001, 0.0, 1.0]), np.array([-2.0, 0.0, 0.0]), wall)

    assert force.tolist() == [0.0, 0.0, 0.0]


def test_tool_tip_follows_the_body():
    wall = WallContact(tool_offset=0.5)
    state = RigidBodyState(
        p=np.array([1.0, 0.0, 1.0]),
        R=rot_z(np.pi / 2),
        omega=np.array([0.0, 0.0, 2.0]),
    )

    position, velocity = tool_tip(state, wall)

    assert position == pytest.approx([1.0, 0.5, 1.0])
    assert velocity == pytest.approx([-1.0, 0.0, 0.0])


def test_contact_model_reads_the_state():
    reaction = contact_model(WallContact(x_w=2.0, K_e=100.0, K_d=0.0))

    assert reaction(RigidBodyState(p=np.array([2.1, 0.0, 0.0]))) == pytest.approx(
        [-10.0, 0.0, 0.0]
    )


def test_wall_config():
    wall = WallContact.from_dict({"x_w": 4, "K_e": 5e5})

    assert wall.to_dict() == {"x_w": 4.0, "K_e": 5e5, "K_d": 1e3, "tool_offset": 0.0}
    with pytest.raises(ConfigError):
        WallContact.from_dict({"x_wall": 4.0})
    with pytest.raises(ConfigError):
        WallContact(K_e=-1.0)


def test_min_jerk_boundaries():
    start, end = np.zeros(3), np.array([1.0, 2.0, 3.0])

    p0, v0, a0 = min_jerk(start, end, 4.0, 0.0)
    p1, v1, a1 = min_jerk(start, end, 4.0, 4.0)

    assert p0.tolist() == [0.0, 0.0, 0.0]
    assert p1.tolist() == [1.0, 2.0, 3.0]
    for vec in (v0, a0, v1, a1):
        assert vec == pytest.approx(np.zeros(3))


def test_min_jerk_derivatives_are_consistent():
    start, end = np.zeros(3), np.array([0.0, 0.0, 2.0])
    h = 1e-5

    before, _, _ = min_jerk(start, end, 3.0, 1.2 - h)
    after, _, _ = min_jerk(start, end, 3.0, 1.2 + h)
    _, velocity, _ = min_jerk(start, end, 3.0, 1.2)

    assert velocity == pytest.approx((after - before) / (2 * h), rel=1e-6)


def test_takeoff_script_holds_the_hover_point():
    script = takeoff_script((0.0, 0.0, 0.0), HOVER_POSITION, 5.0)

    assert script.duration == 5.0
    assert script(2.5).p_r == pytest.approx([0.0, 0.0, 0.5])
    assert script(30.0).p_r.tolist() == [0.0, 0.0, 1.0]
    assert script.phase(4.9) == "takeoff"
    assert script.phase(5.0) == "hold"


def test_wall_script_visits_every_contact_height():
    wall = WallContact()

    script = wall_script(wall)

    windows = script.windows("contact")
    assert script.duration == pytest.approx(67.0)
    assert windows == [(21.0, 26.0), (40.0, 45.0), (59.0, 64.0)]
    for (start, end), height in zip(windows, (1.0, 2.0, 3.0)):
        middle = script(0.5 * (start + end)).p_r
        assert middle == pytest.approx([6.02, 0.0, height])
        assert script.phase(start + 0.1) == "contact"


def test_wall_script_accounts_for_the_tool_offset():
    script = wall_script(WallContact(tool_offset=0.3))

    assert script(23.0).p_r[0] == pytest.approx(5.72)


def test_segments_must_be_contiguous():
    first = Segment("a", 0.0, 1.0, np.zeros(3), np.ones(3))
    second = Segment("b", 1.5, 1.0, np.ones(3), np.zeros(3))

    with pytest.raises(ConfigError):
        ReferenceScript([first, second])
    with pytest.raises(ConfigError):
        ReferenceScript([])
