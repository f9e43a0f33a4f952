"""Boundary data, mixed-problem and solution models."""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .mesh import LabelLike, SegmentLabel, TriMesh, label_name, normalize_label


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


class BoundaryField(BaseModel):
    """Nodal values of a scalar function on one labeled boundary part."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: Tuple[SegmentLabel, ...] = Field(..., description="Segment label or union of labels")
    node_ids: np.ndarray = Field(..., description="Ordered boundary node indices")
    values: np.ndarray = Field(..., description="One value per node")

    @field_validator("label", mode="before")
    @classmethod
    def validate_label(cls, v: Any) -> Tuple[SegmentLabel, ...]:
        """Store labels in canonical order."""
        return normalize_label(v)

    @field_validator("node_ids", mode="before")
    @classmethod
    def validate_node_ids(cls, v: Any) -> np.ndarray:
        """Coerce to a read-only integer vector."""
        return _readonly(np.asarray(v, dtype=np.int64).reshape(-1))

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v: Any) -> np.ndarray:
        """Coerce to a read-only finite float vector."""
        array = np.asarray(v, dtype=float).reshape(-1)
        if not np.all(np.isfinite(array)):
            raise ValueError("Boundary field values must be finite")
        return _readonly(array)

    @model_validator(mode="after")
    def validate_lengths(self) -> "BoundaryField":
        """One value per node."""
        if len(self.node_ids) != len(self.values):
            raise ValueError(
                f"{len(self.node_ids)} nodes but {len(self.values)} values on {label_name(self.label)}"
            )
        return self

    def __len__(self) -> int:
        return len(self.node_ids)

    def is_compatible(self, other: "BoundaryField") -> bool:
        """Two fields are compatible when they live on the same labeled nodes."""
        return self.label == other.label and np.array_equal(self.node_ids, other.node_ids)

    def with_values(self, values: Any) -> "BoundaryField":
        """Same nodes, new values."""
        return BoundaryField(label=self.label, node_ids=self.node_ids, values=values)

    def as_mapping(self) -> Dict[int, float]:
        """Node index -> value."""
        return {int(node): float(value) for node, value in zip(self.node_ids, self.values)}

    def restrict(self, mesh: TriMesh, label: LabelLike) -> "BoundaryField":
        """
        Restrict to a sub-part of this field's label.

        Args:
            mesh: The mesh the field lives on
            label: A label contained in this field's label

        Returns:
            BoundaryField on the requested label
        """
        from src.core.mesh import boundary_nodes

        sub = normalize_label(label)
        if not set(sub) <= set(self.label):
            raise ValueError(f"{label_name(sub)} is not part of {label_name(self.label)}")
        nodes = boundary_nodes(mesh, sub)
        lookup = self.as_mapping()
        return BoundaryField(label=sub, node_ids=nodes, values=[lookup[int(n)] for n in nodes])

    @classmethod
    def concatenate(
        cls,
        mesh: TriMesh,
        first: "BoundaryField",
        second: "BoundaryField",
        junction: str = "first",
    ) -> "BoundaryField":
        """
        Join two fields living on adjacent labels into one field on their union.

        Args:
            mesh: The mesh both fields live on
            first: Field on the first part
            second: Field on the second part
            junction: Value at shared nodes: "first", "second" or "mean"

        Returns:
            BoundaryField on the union of both labels
        """
        from src.core.mesh import boundary_nodes

        if set(first.label) & set(second.label):
            raise ValueError("Concatenated fields must live on disjoint labels")
        union = normalize_label(first.label + second.label)
        nodes = boundary_nodes(mesh, union)
        a, b = first.as_mapping(), second.as_mapping()
        values: List[float] = []
        for node in nodes:
            node = int(node)
            if node in a and node in b:
                if junction == "mean":
                    values.append(0.5 * (a[node] + b[node]))
                elif junction == "second":
                    values.append(b[node])
                else:
                    values.append(a[node])
            elif node in a:
                values.append(a[node])
            else:
                values.append(b[node])
        return cls(label=union, node_ids=nodes, values=values)


class ConditionKind(str, Enum):
    """Type of boundary condition imposed on a segment."""

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class BoundaryCondition(BaseModel):
    """A Dirichlet or Neumann datum on one labeled part of the boundary."""

    model_config = ConfigDict(frozen=True)

    kind: ConditionKind = Field(..., description="Dirichlet (value) or Neumann (normal derivative)")
    field: BoundaryField = Field(..., description="Prescribed nodal data")

    @property
    def label(self) -> Tuple[SegmentLabel, ...]:
        """Segments covered by this condition."""
        return self.field.label

    @classmethod
    def dirichlet(cls, field: BoundaryField) -> "BoundaryCondition":
        """Prescribe u = field."""
        return cls(kind=ConditionKind.DIRICHLET, field=field)

    @classmethod
    def neumann(cls, field: BoundaryField) -> "BoundaryCondition":
        """Prescribe ∂ₙu = field."""
        return cls(kind=ConditionKind.NEUMANN, field=field)


class MixedBVPSpec(BaseModel):
    """
    Per-segment Dirichlet/Neumann assignment of one Laplace problem.

    Conditions are applied in order; on a node shared by two Dirichlet
    conditions the later one wins.
    """

    model_config = ConfigDict(frozen=True)

    conditions: Tuple[BoundaryCondition, ...] = Field(..., description="Boundary conditions in order")

    @field_validator("conditions", mode="before")
    @classmethod
    def validate_conditions(cls, v: Any) -> Tuple[Any, ...]:
        """Accept any sequence."""
        return tuple(v)

    @model_validator(mode="after")
    def validate_assignment(self) -> "MixedBVPSpec":
        """Each segment at most once, at least one Dirichlet condition."""
        seen: set = set()
        for condition in self.conditions:
            overlap = seen & set(condition.label)
            if overlap:
                names = ", ".join(sorted(item.value for item in overlap))
                raise ValueError(f"Segment(s) {names} assigned more than once")
            seen.update(condition.label)
        if not any(c.kind == ConditionKind.DIRICHLET for c in self.conditions):
            raise ValueError("A mixed problem needs at least one Dirichlet segment")
        return self

    @property
    def assigned_labels(self) -> Tuple[SegmentLabel, ...]:
        """All segments covered by some condition."""
        labels: Tuple[SegmentLabel, ...] = ()
        for condition in self.conditions:
            labels += condition.label
        return normalize_label(labels) if labels else ()

    def assignments(self) -> Dict[SegmentLabel, ConditionKind]:
        """Segment -> kind of condition imposed on it."""
        return {label: c.kind for c in self.conditions for label in c.label}

    def describe(self) -> str:
        """Short text like 'D[G11+G12] N[G0]'."""
        return " ".join(
            f"{'D' if c.kind == ConditionKind.DIRICHLET else 'N'}[{label_name(c.label)}]"
            for c in self.conditions
        )


class SolveReport(BaseModel):
    """Outcome of one conjugate-gradient solve."""

    model_config = ConfigDict(frozen=True)

    iterations: int = Field(..., ge=0, description="CG iterations performed")
    relative_residual: float = Field(..., ge=0, description="‖Ax − b‖ / ‖b‖")
    converged: bool = Field(..., description="Whether the tolerance was met")
    tolerance: float = Field(..., gt=0, description="Requested relative tolerance")

    @model_validator(mode="after")
    def validate_converged(self) -> "SolveReport":
        """A converged report must satisfy its own tolerance."""
        if self.converged and self.relative_residual > self.tolerance:
            raise ValueError("converged report above tolerance")
        return self


class FemSolution(BaseModel):
    """Nodal P1 solution over the whole mesh plus the data needed to post-process it."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mesh: TriMesh = Field(..., description="Mesh the solution lives on")
    nodal_values: np.ndarray = Field(..., description="One value per vertex")
    stiffness: Optional[Any] = Field(default=None, description="Assembled CsrMatrix of the solve")
    segment_loads: Dict[SegmentLabel, np.ndarray] = Field(
        default_factory=dict, description="Neumann load vector contributed by each segment"
    )
    dirichlet_nodes: np.ndarray = Field(
        default_factory=lambda: np.zeros(0, dtype=np.int64), description="Constrained nodes"
    )
    report: Optional[SolveReport] = Field(default=None, description="Linear solve report")

    @field_validator("nodal_values", mode="before")
    @classmethod
    def validate_nodal_values(cls, v: Any) -> np.ndarray:
        """Coerce to a read-only float vector."""
        return _readonly(np.asarray(v, dtype=float).reshape(-1))

    @field_validator("dirichlet_nodes", mode="before")
    @classmethod
    def validate_dirichlet_nodes(cls, v: Any) -> np.ndarray:
        """Coerce to a read-only integer vector."""
        return _readonly(np.asarray(v, dtype=np.int64).reshape(-1))

    @model_validator(mode="after")
    def validate_length(self) -> "FemSolution":
        """One value per vertex."""
        if len(self.nodal_values) != self.mesh.n_vertices:
            raise ValueError(
                f"Solution has {len(self.nodal_values)} values for {self.mesh.n_vertices} vertices"
            )
        return self

    def load_excluding(self, label: LabelLike) -> np.ndarray:
        """Sum of the Neumann loads of all segments outside ``label``."""
        excluded = set(normalize_label(label))
        total = np.zeros(self.mesh.n_vertices)
        for segment, load in self.segment_loads.items():
            if segment not in excluded:
                total += load
        return total

    def total_load(self) -> np.ndarray:
        """Full right-hand side of the solved problem."""
        total = np.zeros(self.mesh.n_vertices)
        for load in self.segment_loads.values():
            total += load
        return total
