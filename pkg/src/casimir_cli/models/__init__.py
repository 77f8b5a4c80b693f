"""Geometry descriptions, run configuration and results."""

from .geometry import (
    CylinderInCylinder,
    CylinderPlate,
    ParallelPlates,
    SpherePlate,
    TwoAtoms,
    TwoCylindersOuter,
)
from .results import EnergyResult, ForceResult, QuadratureSpec, SweepRecord, TruncationPolicy
from .run import RunConfig, load_run_config

__all__ = [
    "CylinderInCylinder",
    "CylinderPlate",
    "ParallelPlates",
    "SpherePlate",
    "TwoAtoms",
    "TwoCylindersOuter",
    "EnergyResult",
    "ForceResult",
    "QuadratureSpec",
    "SweepRecord",
    "TruncationPolicy",
    "RunConfig",
    "load_run_config",
]
