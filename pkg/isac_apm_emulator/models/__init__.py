"""
Data models for the ISAC APM emulator.

All models are dataclasses; the persistent ones serialize with
to_dict/from_dict.
"""

from .dataset import CfrDataset
from .emulation import ApmConfig, CirRecord, RtsUnitConfig
from .estimates import (
    DelayProfiles,
    DetectedTarget,
    DetectionList,
    EstimationSettings,
    JointRangeAngleMap,
    Padp,
    PasSlice,
    RangeVelocityMap,
)
from .geometry import ArrayGeometry, FarFieldDirection, NearFieldPoint
from .report import ParameterCheck, RunReport
from .scenario import (
    ArraySpec,
    EmulationSettings,
    NoiseSettings,
    QuantizationSettings,
    SensingScenario,
    Snapshot,
    SweepSettings,
    TargetState,
)

__all__ = [
    "ArrayGeometry",
    "FarFieldDirection",
    "NearFieldPoint",
    "TargetState",
    "Snapshot",
    "ArraySpec",
    "SweepSettings",
    "QuantizationSettings",
    "NoiseSettings",
    "EmulationSettings",
    "SensingScenario",
    "ApmConfig",
    "CirRecord",
    "RtsUnitConfig",
    "CfrDataset",
    "DelayProfiles",
    "DetectedTarget",
    "EstimationSettings",
    "DetectionList",
    "RangeVelocityMap",
    "Padp",
    "PasSlice",
    "JointRangeAngleMap",
    "ParameterCheck",
    "RunReport",
]
