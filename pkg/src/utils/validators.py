"""Validation utilities for meshes, boundary fields and mixed problems."""

from typing import Optional, Tuple

import numpy as np

from src.models.fields import BoundaryField, ConditionKind, MixedBVPSpec
from src.models.mesh import TriMesh, label_name


def validate_mesh(mesh: TriMesh) -> Tuple[bool, Optional[str]]:
    """
    Validate the structural invariants of a labeled triangle mesh.

    This checks that:
    - every triangle is counter-clockwise with positive area
    - every mesh edge is shared by at most two triangles
    - the boundary edges are exactly the edges owned by a single triangle,
      each oriented as in that triangle
    - the boundary edges form one closed loop in the listed order

    Args:
        mesh: The mesh to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if mesh.n_triangles == 0:
        return False, "Mesh must contain at least one triangle"

    if len(mesh.boundary_edges) < 3:
        return False, "Mesh boundary must contain at least three edges"

    areas = mesh.signed_areas()
    bad = np.flatnonzero(~(areas > 0.0))
    if bad.size:
        return False, f"Triangle {int(bad[0])} is clockwise or degenerate (area {areas[bad[0]]:.3e})"

    tri = mesh.triangles
    directed = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    n = mesh.n_vertices
    keys = np.minimum(directed[:, 0], directed[:, 1]) * n + np.maximum(directed[:, 0], directed[:, 1])
    unique_keys, counts = np.unique(keys, return_counts=True)
    if np.any(counts > 2):
        key = int(unique_keys[np.argmax(counts > 2)])
        return False, f"Edge ({key // n}, {key % n}) is shared by more than two triangles"

    topological = set(int(k) for k in unique_keys[counts == 1])
    directed_set = set(map(tuple, directed.tolist()))

    listed = set()
    for k, (a, b) in enumerate(mesh.boundary_edges.tolist()):
        key = min(a, b) * n + max(a, b)
        if key not in topological:
            return False, f"Boundary edge {k} ({a}, {b}) is not owned by exactly one triangle"
        if (a, b) not in directed_set:
            return False, f"Boundary edge {k} ({a}, {b}) is not counter-clockwise"
        if key in listed:
            return False, f"Boundary edge {k} ({a}, {b}) is listed twice"
        listed.add(key)

    if len(listed) != len(topological):
        return False, (
            f"Boundary edges cover {len(listed)} of {len(topological)} topological boundary edges"
        )

    edges = mesh.boundary_edges
    if not np.array_equal(edges[:, 1], np.roll(edges[:, 0], -1)):
        return False, "Boundary edges do not form a closed loop in the listed order"
    if len(np.unique(edges[:, 0])) != len(edges):
        return False, "Boundary loop visits a node twice"

    return True, None


def validate_field_on_mesh(mesh: TriMesh, field: BoundaryField) -> Tuple[bool, Optional[str]]:
    """
    Check that a boundary field lives on the nodes its label selects.

    Args:
        mesh: The mesh
        field: The field to check

    Returns:
        Tuple of (is_valid, error_message)
    """
    from src.core.mesh import boundary_nodes

    expected = boundary_nodes(mesh, field.label)
    if not np.array_equal(expected, field.node_ids):
        return False, (
            f"Field on {label_name(field.label)} has {len(field.node_ids)} nodes, "
            f"mesh has {len(expected)} nodes on that label"
        )
    return True, None


def validate_mixed_spec(mesh: TriMesh, spec: MixedBVPSpec) -> Tuple[bool, Optional[str]]:
    """
    Validate a mixed problem against a mesh.

    Args:
        mesh: The mesh the problem is posed on
        spec: Boundary condition assignment

    Returns:
        Tuple of (is_valid, error_message)
    """
    assigned = set(spec.assigned_labels)
    missing = [label for label in mesh.present_labels() if label not in assigned]
    if missing:
        return False, f"Segment(s) {', '.join(m.value for m in missing)} have no boundary condition"

    has_dirichlet_nodes = False
    for condition in spec.conditions:
        is_valid, error_msg = validate_field_on_mesh(mesh, condition.field)
        if not is_valid:
            return False, error_msg
        if condition.kind == ConditionKind.DIRICHLET and len(condition.field):
            has_dirichlet_nodes = True

    if not has_dirichlet_nodes:
        return False, "Dirichlet conditions select no mesh node; the problem is singular"

    return True, None
