#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""User facing class for a star-shaped cant-tilting hexarotor"""

from tilthex import methods

__license__ = "MIT"

# We keep the concerns separated in their own mixins and build nothing
# expensive until it is requested, so multi-layered inheritance it is.
# pylint: disable=too-many-ancestors


class Hexarotor(
    methods.baseline_allocator.BaselineAllocator,
    methods.cant_selector.CantSelector,
    methods.force_polytope.ForcePolytopes,
    methods.pose_controller.PoseController,
):
    """Model, allocation and control of one hexarotor

    Args:
        params: physical constants, the case-study platform by default
        lut_step: grid step of the polytope LUT [rad]

    Examples:
        >>> from tilthex import Hexarotor, PlatformParams
        >>> hexa = Hexarotor()
        >>> hexa.params.m
        3.5
        >>> Hexarotor(PlatformParams.wall_platform()).params.m
        3.8

        The polytope table is built on first access and kept afterwards
        >>> len(hexa.lut)
        120
        >>> hexa.lut is hexa.lut
        True

        Parameters are read-only
        >>> hexa.params = PlatformParams()
        Traceback (most recent call last):
        ...
        AttributeError: ...
    """
