"""Experiment configuration and summary models."""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import get_settings
from .fields import BoundaryField
from .kmf import CauchyData, CompletionResult
from .mesh import TriMesh


class Algorithm(str, Enum):
    """Which driver(s) an experiment runs."""

    STANDARD = "standard"
    ALTERNATING = "alternating"
    BOTH = "both"

    def drivers(self) -> List["Algorithm"]:
        """Concrete drivers to run, in output order."""
        if self == Algorithm.BOTH:
            return [Algorithm.STANDARD, Algorithm.ALTERNATING]
        return [self]


class FluxData(str, Enum):
    """How the manufactured Neumann datum g is produced on Γ₀."""

    DISCRETE = "discrete"
    INTERPOLATED = "interpolated"


class ExperimentConfig(BaseModel):
    """One disk experiment: geometry, algorithm, stopping and noise settings."""

    model_config = ConfigDict(frozen=True)

    theta: Optional[float] = Field(default=None, description="Γ₁ opening angle in radians")
    n_boundary: int = Field(
        default_factory=lambda: get_settings().default_n_boundary,
        ge=8,
        description="Number of boundary nodes of the generated disk",
    )
    algorithm: Algorithm = Field(default=Algorithm.BOTH, description="Driver(s) to run")
    tol_E: float = Field(
        default_factory=lambda: get_settings().stop_tolerance, gt=0, description="Stopping threshold on E"
    )
    max_iters: int = Field(
        default_factory=lambda: get_settings().max_iterations, ge=1, description="Iteration cap"
    )
    noise_level: float = Field(default=0.0, ge=0, description="Relative noise on f and g")
    seed: int = Field(default=0, description="Noise generator seed")
    flux_data: FluxData = Field(
        default=FluxData.INTERPOLATED,
        description="g as the discrete flux of the forward solve, or sampled from the exact flux",
    )
    omega: float = Field(default=1.0, gt=0, le=2, description="Relaxation parameter")
    output_dir: Path = Field(
        default_factory=lambda: get_settings().output_path, description="Directory for CSV output"
    )
    mesh_file: Optional[Path] = Field(default=None, description="Load this mesh instead of generating one")

    @field_validator("theta")
    @classmethod
    def validate_theta(cls, v: Optional[float]) -> Optional[float]:
        """θ must lie strictly inside (0, 2π)."""
        if v is not None and not 0.0 < v < 2.0 * math.pi:
            raise ValueError("theta must lie in (0, 2π)")
        return v

    @model_validator(mode="after")
    def validate_geometry_source(self) -> "ExperimentConfig":
        """Either a θ to generate a disk with, or a mesh file."""
        if self.theta is None and self.mesh_file is None:
            raise ValueError("Either theta or mesh_file is required")
        return self

    @property
    def label(self) -> str:
        """Short identifier used in logs and tables."""
        if self.theta is not None:
            return f"theta={self.theta:.6g}"
        return f"mesh={self.mesh_file}"


class DiskProblem(BaseModel):
    """A manufactured Cauchy problem on a labeled mesh."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mesh: TriMesh = Field(..., description="Triangulated domain")
    data: CauchyData = Field(..., description="(Possibly perturbed) data on Γ₀")
    u0: BoundaryField = Field(..., description="Initial Dirichlet guess on Γ₁")
    exact_trace: BoundaryField = Field(..., description="Exact u on Γ₁")
    exact_flux: BoundaryField = Field(..., description="Exact ∂ₙu on Γ₁")


class RunSummary(BaseModel):
    """Outcome of one driver run, matching the last record of its history."""

    model_config = ConfigDict(frozen=True)

    algorithm: str = Field(..., description="Driver name")
    theta: Optional[float] = Field(default=None, description="Γ₁ opening angle")
    iterations: int = Field(..., ge=0, description="Recorded iterations")
    total_solves: int = Field(..., ge=0, description="Mixed solves performed")
    final_E: Optional[float] = Field(default=None, description="Last E")
    final_e_u: Optional[float] = Field(default=None, description="Last e_u")
    final_e_v: Optional[float] = Field(default=None, description="Last e_v")
    converged: bool = Field(..., description="Whether E reached tol_E")
    wall_time: float = Field(default=0.0, ge=0, description="Seconds spent in the driver")

    @classmethod
    def from_result(cls, result: CompletionResult, theta: Optional[float], wall_time: float) -> "RunSummary":
        """Summarize a completion result."""
        last = result.final_record
        return cls(
            algorithm=result.algorithm,
            theta=theta,
            iterations=result.iterations,
            total_solves=result.total_solves,
            final_E=last.E if last else None,
            final_e_u=last.e_u if last else None,
            final_e_v=last.e_v if last else None,
            converged=result.converged,
            wall_time=wall_time,
        )

    def to_dict(self, include_time: bool = True) -> Dict[str, Any]:
        """Row of the summary table."""
        row: Dict[str, Any] = {
            "algorithm": self.algorithm,
            "theta": self.theta,
            "iterations": self.iterations,
            "solves": self.total_solves,
            "converged": self.converged,
            "E": self.final_E,
            "e_u": self.final_e_u,
            "e_v": self.final_e_v,
        }
        if include_time:
            row["wall_time"] = self.wall_time
        return row
