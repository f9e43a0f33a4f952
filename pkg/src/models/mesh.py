"""Triangle mesh data models."""

import math
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SegmentLabel(str, Enum):
    """Label of a boundary segment; the value is the token used in mesh files."""

    GAMMA0 = "G0"
    GAMMA1_1 = "G11"
    GAMMA1_2 = "G12"


# The inaccessible part is the union of its two halves.
GAMMA1: Tuple[SegmentLabel, ...] = (SegmentLabel.GAMMA1_1, SegmentLabel.GAMMA1_2)
ALL_SEGMENTS: Tuple[SegmentLabel, ...] = tuple(SegmentLabel)

LabelLike = Union[SegmentLabel, str, Tuple[Any, ...], List[Any], frozenset]

_LABEL_ORDER: Dict[SegmentLabel, int] = {label: i for i, label in enumerate(SegmentLabel)}


def normalize_label(label: LabelLike) -> Tuple[SegmentLabel, ...]:
    """
    Turn a label or a union of labels into a canonical sorted tuple.

    Args:
        label: A SegmentLabel, its file token, or any collection of them

    Returns:
        Tuple of unique labels in declaration order (G0, G11, G12)
    """
    if isinstance(label, (SegmentLabel, str)):
        items = [label]
    else:
        items = list(label)
    if not items:
        raise ValueError("A label set needs at least one segment label")
    labels = {SegmentLabel(item) for item in items}
    return tuple(sorted(labels, key=_LABEL_ORDER.__getitem__))


def label_name(label: LabelLike) -> str:
    """Readable name of a label set, e.g. 'G11+G12'."""
    return "+".join(item.value for item in normalize_label(label))


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


class Point2(BaseModel):
    """A point of the plane."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="Abscissa")
    y: float = Field(..., description="Ordinate")

    @field_validator("x", "y")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Coordinates must be finite."""
        if not math.isfinite(v):
            raise ValueError("Point coordinates must be finite")
        return v

    @property
    def angle(self) -> float:
        """Polar angle in [0, 2π)."""
        return math.atan2(self.y, self.x) % (2.0 * math.pi)


class TriMesh(BaseModel):
    """
    A triangulated planar domain with labeled boundary edges.

    Boundary edges are stored in counter-clockwise loop order: the end node of
    edge k is the start node of edge k+1. Full structural validation lives in
    ``src.utils.validators.validate_mesh``; the model only checks shapes.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray = Field(..., description="(N, 2) vertex coordinates")
    triangles: np.ndarray = Field(..., description="(M, 3) counter-clockwise vertex indices")
    boundary_edges: np.ndarray = Field(..., description="(K, 2) boundary edges in loop order")
    edge_labels: Tuple[SegmentLabel, ...] = Field(..., description="Segment label of each boundary edge")
    theta: Optional[float] = Field(default=None, description="Γ₁ opening angle for generated disks")

    @field_validator("vertices", mode="before")
    @classmethod
    def validate_vertices(cls, v: Any) -> np.ndarray:
        """Coerce to a read-only (N, 2) float array."""
        array = np.asarray(v, dtype=float).reshape(-1, 2) if np.size(v) else np.zeros((0, 2))
        if not np.all(np.isfinite(array)):
            raise ValueError("Vertex coordinates must be finite")
        return _readonly(array)

    @field_validator("triangles", "boundary_edges", mode="before")
    @classmethod
    def validate_connectivity(cls, v: Any, info) -> np.ndarray:
        """Coerce to a read-only integer array."""
        width = 3 if info.field_name == "triangles" else 2
        array = np.asarray(v, dtype=np.int64).reshape(-1, width) if np.size(v) else np.zeros((0, width), dtype=np.int64)
        return _readonly(array)

    @field_validator("edge_labels", mode="before")
    @classmethod
    def validate_edge_labels(cls, v: Any) -> Tuple[SegmentLabel, ...]:
        """Accept enum members or file tokens."""
        return tuple(SegmentLabel(item) for item in v)

    @model_validator(mode="after")
    def validate_shapes(self) -> "TriMesh":
        """Every boundary edge needs a label and indices must be in range."""
        if len(self.edge_labels) != len(self.boundary_edges):
            raise ValueError(
                f"{len(self.boundary_edges)} boundary edges but {len(self.edge_labels)} labels"
            )
        n = len(self.vertices)
        for name, array in (("triangles", self.triangles), ("boundary_edges", self.boundary_edges)):
            if array.size and (array.min() < 0 or array.max() >= n):
                raise ValueError(f"{name} reference vertices outside [0, {n})")
        if self.theta is not None and not 0.0 < self.theta < 2.0 * math.pi:
            raise ValueError("theta must lie in (0, 2π)")
        return self

    @property
    def n_vertices(self) -> int:
        """Number of vertices."""
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        """Number of triangles."""
        return len(self.triangles)

    @property
    def labeled_edges(self) -> List[Tuple[int, int, SegmentLabel]]:
        """Boundary edges as (node_a, node_b, label) triples."""
        return [
            (int(a), int(b), label)
            for (a, b), label in zip(self.boundary_edges, self.edge_labels)
        ]

    def point(self, index: int) -> Point2:
        """Vertex ``index`` as a Point2."""
        x, y = self.vertices[index]
        return Point2(x=float(x), y=float(y))

    def edge_mask(self, label: LabelLike) -> np.ndarray:
        """Boolean mask of the boundary edges carrying one of the given labels."""
        wanted = set(normalize_label(label))
        return np.array([item in wanted for item in self.edge_labels], dtype=bool)

    def edge_lengths(self) -> np.ndarray:
        """Length of every boundary edge."""
        if not len(self.boundary_edges):
            return np.zeros(0)
        a = self.vertices[self.boundary_edges[:, 0]]
        b = self.vertices[self.boundary_edges[:, 1]]
        return np.hypot(*(b - a).T)

    def signed_areas(self) -> np.ndarray:
        """Signed area of every triangle (positive for counter-clockwise)."""
        p0, p1, p2 = (self.vertices[self.triangles[:, i]] for i in range(3))
        d1 = p1 - p0
        d2 = p2 - p0
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def present_labels(self) -> Tuple[SegmentLabel, ...]:
        """Labels carried by at least one boundary edge."""
        return normalize_label(self.edge_labels) if self.edge_labels else ()
