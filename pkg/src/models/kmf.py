"""Data models of the data-completion drivers."""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import get_settings
from .fields import BoundaryField, FemSolution
from .mesh import GAMMA1, SegmentLabel


class StartMode(str, Enum):
    """Which boundary datum on Γ₁ the iteration is initialized with."""

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class CauchyData(BaseModel):
    """Over-specified data on the accessible part Γ₀: u = f and ∂ₙu = g."""

    model_config = ConfigDict(frozen=True)

    f: BoundaryField = Field(..., description="Dirichlet datum on Γ₀")
    g: BoundaryField = Field(..., description="Neumann datum on Γ₀")

    @model_validator(mode="after")
    def validate_on_gamma0(self) -> "CauchyData":
        """Both data live on the same Γ₀ nodes."""
        for name, field in (("f", self.f), ("g", self.g)):
            if field.label != (SegmentLabel.GAMMA0,):
                raise ValueError(f"Cauchy datum {name} must live on G0")
        if not self.f.is_compatible(self.g):
            raise ValueError("Cauchy data f and g must share the same G0 nodes")
        return self


class KmfOptions(BaseModel):
    """Stopping, relaxation and diagnostics options of a completion run."""

    model_config = ConfigDict(frozen=True)

    tol_E: float = Field(
        default_factory=lambda: get_settings().stop_tolerance,
        gt=0,
        description="Stop when ‖u_n − u_{n+1}‖ on Γ₁ falls below this",
    )
    max_iters: int = Field(
        default_factory=lambda: get_settings().max_iterations,
        ge=1,
        description="Iteration cap",
    )
    relaxation_omega: float = Field(
        default=1.0, gt=0, le=2, description="Relaxation of the Neumann update (1 = off)"
    )
    exact_trace: Optional[BoundaryField] = Field(
        default=None, description="Exact u on Γ₁, enables e_u"
    )
    exact_flux: Optional[BoundaryField] = Field(
        default=None, description="Exact ∂ₙu on Γ₁, enables e_v"
    )

    @field_validator("exact_trace", "exact_flux")
    @classmethod
    def validate_exact_on_gamma1(cls, v: Optional[BoundaryField]) -> Optional[BoundaryField]:
        """Exact fields are compared on the whole of Γ₁."""
        if v is not None and v.label != GAMMA1:
            raise ValueError("Exact fields must live on Γ₁ = G11 + G12")
        return v


class IterationRecord(BaseModel):
    """Diagnostics of one completed iteration."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Iteration index")
    E: float = Field(..., ge=0, description="‖u_n − u_{n+1}‖ on Γ₁")
    e_u: Optional[float] = Field(default=None, ge=0, description="‖u_n − u_ex‖ on Γ₁")
    e_v: Optional[float] = Field(default=None, ge=0, description="‖v_n − ∂ₙu_ex‖ on Γ₁")
    solves_so_far: int = Field(..., ge=1, description="Mixed solves up to and including iteration n")

    def to_dict(self) -> Dict[str, Any]:
        """Row of an iteration-curve table."""
        return {
            "n": self.n,
            "E": self.E,
            "e_u": self.e_u,
            "e_v": self.e_v,
            "solves": self.solves_so_far,
        }


class CompletionResult(BaseModel):
    """Recovered Cauchy data on Γ₁ and the iteration history that produced it."""

    model_config = ConfigDict(frozen=True)

    algorithm: str = Field(..., description="'standard' or 'alternating'")
    start_mode: StartMode = Field(default=StartMode.DIRICHLET, description="Datum the iteration started from")
    u_gamma1: BoundaryField = Field(..., description="Recovered Dirichlet data on Γ₁")
    v_gamma1: BoundaryField = Field(..., description="Recovered Neumann data on Γ₁")
    history: List[IterationRecord] = Field(default_factory=list, description="One record per iteration")
    converged: bool = Field(..., description="Whether E dropped below tol_E")
    tol_E: float = Field(..., gt=0, description="Stopping threshold used")
    final_solution: FemSolution = Field(..., description="Last well-posed solution of the run")

    @model_validator(mode="after")
    def validate_history(self) -> "CompletionResult":
        """Converged runs end below the threshold; solve counts increase."""
        if self.converged and (not self.history or self.history[-1].E > self.tol_E):
            raise ValueError("A converged result must end with E <= tol_E")
        counts = [record.solves_so_far for record in self.history]
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise ValueError("solves_so_far must be strictly increasing")
        return self

    @property
    def iterations(self) -> int:
        """Number of recorded iterations."""
        return len(self.history)

    @property
    def final_record(self) -> Optional[IterationRecord]:
        """Last iteration record, if any."""
        return self.history[-1] if self.history else None

    @property
    def total_solves(self) -> int:
        """Mixed solves performed up to the last recorded iteration."""
        return self.history[-1].solves_so_far if self.history else 0


def first_iteration_below(history: List[IterationRecord], attribute: str, level: float) -> Optional[int]:
    """
    First iteration whose diagnostic is at or below a level.

    Args:
        history: Iteration records of one run
        attribute: 'E', 'e_u' or 'e_v'
        level: Threshold

    Returns:
        Iteration index n, or None if never reached
    """
    for record in history:
        value = getattr(record, attribute)
        if value is not None and value <= level:
            return record.n
    return None
