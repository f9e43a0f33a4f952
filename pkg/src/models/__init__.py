"""Data models for the KMF data-completion toolkit."""

from .mesh import ALL_SEGMENTS, GAMMA1, Point2, SegmentLabel, TriMesh, label_name, normalize_label
from .fields import (
    BoundaryCondition,
    BoundaryField,
    ConditionKind,
    FemSolution,
    MixedBVPSpec,
    SolveReport,
)
from .kmf import (
    CauchyData,
    CompletionResult,
    IterationRecord,
    KmfOptions,
    StartMode,
    first_iteration_below,
)
from .experiment import Algorithm, DiskProblem, ExperimentConfig, FluxData, RunSummary

__all__ = [
    "ALL_SEGMENTS",
    "GAMMA1",
    "Point2",
    "SegmentLabel",
    "TriMesh",
    "label_name",
    "normalize_label",
    "BoundaryCondition",
    "BoundaryField",
    "ConditionKind",
    "FemSolution",
    "MixedBVPSpec",
    "SolveReport",
    "CauchyData",
    "CompletionResult",
    "IterationRecord",
    "KmfOptions",
    "StartMode",
    "first_iteration_below",
    "Algorithm",
    "FluxData",
    "DiskProblem",
    "ExperimentConfig",
    "RunSummary",
]
