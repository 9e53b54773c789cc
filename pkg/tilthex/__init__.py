#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This module exposes a star-shaped cant-tilting hexarotor through the Hexarotor
class. Instantiate it with the platform parameters, or without arguments for
the case-study platform.

With a Hexarotor object you can evaluate the propeller wrench, integrate the
rigid-body dynamics, allocate spin rates, build the zero-moment force polytope
table and select the cant angle online.

Closed-loop scenarios, Monte-Carlo campaigns and the command line live in
tilthex.harness.

"""

from tilthex.errors import (
    AllocationFailure,
    ConfigError,
    ContractViolation,
    EmptyTraceError,
    IntegrationFault,
    LutFormatError,
    SaturationError,
    SimulationFault,
    SingularAllocationError,
    SolverFailure,
    StabilityAbort,
    TiltHexError,
)
from tilthex.hexarotor import Hexarotor
from tilthex.params import PlatformParams

__license__ = "MIT"
