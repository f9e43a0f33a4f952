"""Unit-disk mesh generation and boundary queries."""

import math
from typing import List, Tuple

import numpy as np
from scipy import sparse
from scipy.spatial import Delaunay

from config.settings import get_settings
from src.core.errors import MeshError, MeshValidationError
from src.models.mesh import LabelLike, SegmentLabel, TriMesh, label_name
from src.utils.logger import get_logger
from src.utils.validators import validate_mesh

logger = get_logger(__name__)

_GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0
MIN_QUALITY_DEGREES = 20.0


def boundary_partition(n_boundary: int, theta: float) -> Tuple[int, int]:
    """
    Split the boundary node budget between the two Γ₁ halves and Γ₀.

    Each half gets ⌈n·θ/(4π)⌉ intervals, Γ₀ the remainder (at least one).

    Args:
        n_boundary: Total number of boundary nodes
        theta: Γ₁ opening angle

    Returns:
        Tuple of (intervals per Γ₁ half, intervals on Γ₀)
    """
    per_half = math.ceil(n_boundary * theta / (4.0 * math.pi) - 1e-9)
    per_half = max(1, min(per_half, (n_boundary - 1) // 2))
    return per_half, n_boundary - 2 * per_half


def boundary_angles(n_boundary: int, theta: float) -> Tuple[np.ndarray, List[SegmentLabel]]:
    """
    Boundary node angles and the label of the edge leaving each node.

    Angles 0, θ/2 and θ are always present.

    Args:
        n_boundary: Total number of boundary nodes
        theta: Γ₁ opening angle

    Returns:
        Tuple of (angles in [0, 2π), edge labels)
    """
    per_half, rest = boundary_partition(n_boundary, theta)
    half = 0.5 * theta
    steps = np.arange(per_half) / per_half
    angles = np.concatenate([
        half * steps,
        half + half * steps,
        theta + (2.0 * math.pi - theta) * np.arange(rest) / rest,
    ])
    labels = (
        [SegmentLabel.GAMMA1_1] * per_half
        + [SegmentLabel.GAMMA1_2] * per_half
        + [SegmentLabel.GAMMA0] * rest
    )
    return angles, labels


def _interior_rings(spacing: float) -> np.ndarray:
    """Concentric point rings with roughly ``spacing`` between neighbours, plus the centre."""
    ring_gap = spacing * math.sqrt(3.0) / 2.0
    n_rings = max(1, int(round(1.0 / ring_gap)))
    dr = 1.0 / n_rings
    points = [np.zeros((1, 2))]
    for k in range(1, n_rings):
        radius = 1.0 - k * dr
        count = max(3, int(round(2.0 * math.pi * radius / spacing)))
        offset = ((k * _GOLDEN_FRACTION) % 1.0) * 2.0 * math.pi / count
        phi = offset + 2.0 * math.pi * np.arange(count) / count
        points.append(radius * np.column_stack([np.cos(phi), np.sin(phi)]))
    return np.vstack(points)


def _triangulate(points: np.ndarray) -> np.ndarray:
    """Delaunay triangles oriented counter-clockwise, degenerate ones dropped."""
    simplices = Delaunay(points).simplices.astype(np.int64)
    p0, p1, p2 = (points[simplices[:, i]] for i in range(3))
    areas = 0.5 * ((p1 - p0)[:, 0] * (p2 - p0)[:, 1] - (p1 - p0)[:, 1] * (p2 - p0)[:, 0])
    flip = areas < 0
    simplices[flip] = simplices[flip][:, [0, 2, 1]]
    scale = np.max(np.abs(areas)) if areas.size else 0.0
    return simplices[np.abs(areas) > 1e-12 * scale]


def _smooth(points: np.ndarray, n_fixed: int, sweeps: int) -> np.ndarray:
    """Laplacian smoothing of the free points, re-triangulating after every sweep."""
    n = len(points)
    for _ in range(sweeps):
        tri = _triangulate(points)
        edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        adjacency = sparse.coo_matrix(
            (np.ones(2 * len(edges)), (np.r_[edges[:, 0], edges[:, 1]], np.r_[edges[:, 1], edges[:, 0]])),
            shape=(n, n),
        ).tocsr()
        adjacency.data[:] = 1.0
        degree = np.asarray(adjacency.sum(axis=1)).ravel()
        averaged = (adjacency @ points) / degree[:, None]
        points = points.copy()
        points[n_fixed:] = averaged[n_fixed:]
    return points


def generate_disk_mesh(n_boundary: int, theta: float) -> TriMesh:
    """
    Triangulate the unit disk with Γ₁ = arc [0, θ] split at θ/2.

    Args:
        n_boundary: Number of boundary nodes (at least 8)
        theta: Γ₁ opening angle in (0, 2π)

    Returns:
        Validated TriMesh whose boundary nodes come first, node 0 at angle 0

    Raises:
        MeshError: on invalid arguments
        MeshValidationError: if the triangulation breaks a mesh invariant
    """
    if n_boundary < 8:
        raise MeshError(f"n_boundary must be at least 8, got {n_boundary}")
    if not 0.0 < theta < 2.0 * math.pi:
        raise MeshError(f"theta must lie in (0, 2π), got {theta}")

    settings = get_settings()
    angles, labels = boundary_angles(n_boundary, theta)
    boundary = np.column_stack([np.cos(angles), np.sin(angles)])
    chords = np.hypot(*(np.roll(boundary, -1, axis=0) - boundary).T)
    spacing = float(chords.mean())

    points = np.vstack([boundary, _interior_rings(spacing)])
    points = _smooth(points, n_boundary, settings.smoothing_sweeps)
    triangles = _triangulate(points)

    edges = np.column_stack([np.arange(n_boundary), (np.arange(n_boundary) + 1) % n_boundary])
    mesh = TriMesh(
        vertices=points,
        triangles=triangles,
        boundary_edges=edges,
        edge_labels=labels,
        theta=theta,
    )

    is_valid, error_msg = validate_mesh(mesh)
    if not is_valid:
        logger.error(f"Generated disk mesh is invalid: {error_msg}")
        raise MeshValidationError(error_msg)

    m11 = boundary_measure(mesh, SegmentLabel.GAMMA1_1)
    m12 = boundary_measure(mesh, SegmentLabel.GAMMA1_2)
    if abs(m11 - m12) > 1e-12 * max(m11, m12):
        raise MeshValidationError(f"Γ₁ halves differ in measure: {m11!r} vs {m12!r}")

    quality = triangle_quality(mesh)
    if quality < MIN_QUALITY_DEGREES:
        logger.warning(f"Disk mesh minimum angle {quality:.1f}° is below {MIN_QUALITY_DEGREES}°")

    logger.debug(
        f"Disk mesh: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, "
        f"theta={theta:.6g}, min angle {quality:.1f}°"
    )
    return mesh


def boundary_nodes(mesh: TriMesh, label: LabelLike) -> np.ndarray:
    """
    Nodes of a labeled boundary part in counter-clockwise order.

    Both end nodes of every run of labeled edges are included; a label that
    covers the whole loop returns each node once.

    Args:
        mesh: The mesh
        label: A segment label or a union of labels

    Returns:
        Integer array of vertex indices
    """
    mask = mesh.edge_mask(label)
    edges = mesh.boundary_edges
    count = len(mask)
    if not mask.any():
        return np.zeros(0, dtype=np.int64)
    if mask.all():
        return edges[:, 0].copy()

    nodes: List[int] = []
    for start in range(count):
        if not mask[start] or mask[start - 1]:
            continue
        nodes.append(int(edges[start, 0]))
        k = start
        while mask[k % count]:
            nodes.append(int(edges[k % count, 1]))
            k += 1
    return np.asarray(nodes, dtype=np.int64)


def boundary_measure(mesh: TriMesh, label: LabelLike) -> float:
    """
    Polygonal length of a labeled boundary part.

    Args:
        mesh: The mesh
        label: A segment label or a union of labels

    Returns:
        Sum of the lengths of the labeled edges
    """
    return float(mesh.edge_lengths()[mesh.edge_mask(label)].sum())


def boundary_normals(mesh: TriMesh, label: LabelLike) -> np.ndarray:
    """
    Outward unit normals at the nodes of a labeled part.

    Each node gets the normalized sum of the normals of its two boundary edges.

    Args:
        mesh: The mesh
        label: A segment label or a union of labels

    Returns:
        (k, 2) array aligned with ``boundary_nodes(mesh, label)``
    """
    edges = mesh.boundary_edges
    d = mesh.vertices[edges[:, 1]] - mesh.vertices[edges[:, 0]]
    lengths = np.hypot(d[:, 0], d[:, 1])
    normals = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]

    accumulated = np.zeros((mesh.n_vertices, 2))
    np.add.at(accumulated, edges[:, 0], normals)
    np.add.at(accumulated, edges[:, 1], normals)

    nodes = boundary_nodes(mesh, label)
    result = accumulated[nodes]
    return result / np.hypot(result[:, 0], result[:, 1])[:, None]


def triangle_quality(mesh: TriMesh) -> float:
    """Smallest interior angle of the mesh, in degrees."""
    p = [mesh.vertices[mesh.triangles[:, i]] for i in range(3)]
    sides = [np.hypot(*(p[(i + 2) % 3] - p[(i + 1) % 3]).T) for i in range(3)]
    angles = []
    for i in range(3):
        a, b, c = sides[i], sides[(i + 1) % 3], sides[(i + 2) % 3]
        cosine = np.clip((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0)
        angles.append(np.degrees(np.arccos(cosine)))
    return float(np.min(angles)) if mesh.n_triangles else 0.0


def describe_mesh(mesh: TriMesh) -> str:
    """One-line description used in logs and reports."""
    parts = ", ".join(
        f"{label_name(label)}: {int(mesh.edge_mask(label).sum())} edges"
        for label in mesh.present_labels()
    )
    return f"{mesh.n_vertices} vertices, {mesh.n_triangles} triangles ({parts})"


__all__ = [
    "boundary_partition",
    "boundary_angles",
    "generate_disk_mesh",
    "boundary_nodes",
    "boundary_measure",
    "boundary_normals",
    "triangle_quality",
    "describe_mesh",
]
