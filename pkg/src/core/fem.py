"""
P1 finite elements for mixed Dirichlet/Neumann Laplace problems.

Assembly, the constrained solve, boundary traces, variational flux recovery
and boundary L² norms. All quadrature is exact for piecewise-linear data.
"""

from typing import Callable, Dict, Optional

import numpy as np

from config.settings import get_settings
from src.core.errors import AssemblyError, IllPosedProblemError, IncompatibleFieldError, SolverError
from src.core.mesh import boundary_nodes, boundary_normals
from src.core.sparse import CsrMatrix, conjugate_gradient, csr_from_arrays
from src.models.fields import (
    BoundaryField,
    ConditionKind,
    FemSolution,
    MixedBVPSpec,
    SolveReport,
)
from src.models.mesh import LabelLike, SegmentLabel, TriMesh, label_name, normalize_label
from src.utils.logger import get_logger
from src.utils.validators import validate_field_on_mesh, validate_mixed_spec

logger = get_logger(__name__)

BoundaryFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


def local_stiffness(p0, p1, p2) -> np.ndarray:
    """
    Element stiffness matrix of one P1 triangle.

    K_ij = (b_i b_j + c_i c_j) / (4A) with b, c the coordinate differences
    of the opposite edge.

    Args:
        p0: First vertex (x, y)
        p1: Second vertex
        p2: Third vertex

    Returns:
        3×3 symmetric matrix

    Raises:
        AssemblyError: if the triangle has (near) zero area
    """
    x = np.array([p0[0], p1[0], p2[0]], dtype=float)
    y = np.array([p0[1], p1[1], p2[1]], dtype=float)
    b = np.array([y[1] - y[2], y[2] - y[0], y[0] - y[1]])
    c = np.array([x[2] - x[1], x[0] - x[2], x[1] - x[0]])
    area = 0.5 * (b[0] * c[1] - b[1] * c[0])
    scale = max(float(np.max(np.abs(b))), float(np.max(np.abs(c))), 1e-300)
    if abs(area) <= 1e-14 * scale * scale:
        raise AssemblyError(f"Degenerate triangle with area {area:.3e}")
    return (np.outer(b, b) + np.outer(c, c)) / (4.0 * abs(area))


def assemble_stiffness(mesh: TriMesh) -> CsrMatrix:
    """
    Global P1 stiffness matrix of the Laplacian.

    Args:
        mesh: A valid mesh

    Returns:
        Symmetric positive semidefinite CsrMatrix with zero row sums

    Raises:
        AssemblyError: on a degenerate triangle
    """
    tri = mesh.triangles
    if not len(tri):
        raise AssemblyError("Cannot assemble a mesh without triangles")
    p = [mesh.vertices[tri[:, i]] for i in range(3)]

    # b_i, c_i per element, vectorized over all triangles
    b = np.column_stack([p[1][:, 1] - p[2][:, 1], p[2][:, 1] - p[0][:, 1], p[0][:, 1] - p[1][:, 1]])
    c = np.column_stack([p[2][:, 0] - p[1][:, 0], p[0][:, 0] - p[2][:, 0], p[1][:, 0] - p[0][:, 0]])
    areas = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    scale = np.maximum(np.abs(b).max(axis=1), np.abs(c).max(axis=1))
    degenerate = np.flatnonzero(np.abs(areas) <= 1e-14 * scale * scale)
    if degenerate.size:
        k = int(degenerate[0])
        raise AssemblyError(f"Triangle {k} {tri[k].tolist()} is degenerate (area {areas[k]:.3e})")

    local = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * np.abs(areas))[:, None, None]
    rows = np.repeat(tri, 3, axis=1)
    cols = np.tile(tri, (1, 3))
    stiffness = csr_from_arrays(mesh.n_vertices, rows, cols, local.reshape(len(tri), 9))
    logger.debug(f"Assembled stiffness: {stiffness}")
    return stiffness


def _check_field(mesh: TriMesh, label: LabelLike, field: BoundaryField) -> None:
    if field.label != normalize_label(label):
        raise IncompatibleFieldError(
            f"Field lives on {label_name(field.label)}, expected {label_name(label)}"
        )
    is_valid, error_msg = validate_field_on_mesh(mesh, field)
    if not is_valid:
        raise IncompatibleFieldError(error_msg)


def _edge_load(mesh: TriMesh, mask: np.ndarray, lookup: Dict[int, float]) -> np.ndarray:
    """Exact ∫ g φ_i ds over the masked boundary edges for nodal g."""
    load = np.zeros(mesh.n_vertices)
    edges = mesh.boundary_edges[mask]
    if not len(edges):
        return load
    lengths = mesh.edge_lengths()[mask]
    g1 = np.array([lookup[int(a)] for a in edges[:, 0]])
    g2 = np.array([lookup[int(b)] for b in edges[:, 1]])
    np.add.at(load, edges[:, 0], lengths / 6.0 * (2.0 * g1 + g2))
    np.add.at(load, edges[:, 1], lengths / 6.0 * (g1 + 2.0 * g2))
    return load


def assemble_neumann_load(mesh: TriMesh, label: LabelLike, g: BoundaryField) -> np.ndarray:
    """
    Load vector of a Neumann datum on a labeled boundary part.

    Args:
        mesh: The mesh
        label: Segment label or union of labels
        g: Nodal normal-derivative values on that label

    Returns:
        Vector over all vertices

    Raises:
        IncompatibleFieldError: if g does not live on ``label``
    """
    _check_field(mesh, label, g)
    return _edge_load(mesh, mesh.edge_mask(label), g.as_mapping())


def boundary_mass(mesh: TriMesh, label: LabelLike) -> CsrMatrix:
    """
    Exact P1 mass matrix of a labeled boundary part.

    Rows and columns follow ``boundary_nodes(mesh, label)``.

    Args:
        mesh: The mesh
        label: Segment label or union of labels

    Returns:
        CsrMatrix with edge entries L/3 (diagonal) and L/6 (coupling)
    """
    nodes = boundary_nodes(mesh, label)
    position = {int(node): i for i, node in enumerate(nodes)}
    mask = mesh.edge_mask(label)
    edges = mesh.boundary_edges[mask]
    lengths = mesh.edge_lengths()[mask]
    a = np.array([position[int(n)] for n in edges[:, 0]], dtype=np.int64)
    b = np.array([position[int(n)] for n in edges[:, 1]], dtype=np.int64)
    rows = np.concatenate([a, b, a, b])
    cols = np.concatenate([a, b, b, a])
    vals = np.concatenate([lengths / 3.0, lengths / 3.0, lengths / 6.0, lengths / 6.0])
    return csr_from_arrays(len(nodes), rows, cols, vals)


def solve_mixed_bvp(
    mesh: TriMesh,
    spec: MixedBVPSpec,
    stiffness: Optional[CsrMatrix] = None,
) -> FemSolution:
    """
    Solve a Laplace problem with per-segment Dirichlet/Neumann conditions.

    Dirichlet rows and columns are eliminated symmetrically. A node touching
    a Dirichlet edge is constrained, and where two Dirichlet conditions share
    a node the later one in ``spec`` wins.

    Args:
        mesh: The mesh
        spec: Condition assignment covering every labeled segment
        stiffness: Pre-assembled stiffness of ``mesh`` (assembled if omitted)

    Returns:
        FemSolution carrying the stiffness, per-segment loads and solve report

    Raises:
        IllPosedProblemError: if the spec does not describe a well-posed problem on ``mesh``
        SolverError: if CG does not converge
    """
    is_valid, error_msg = validate_mixed_spec(mesh, spec)
    if not is_valid:
        raise IllPosedProblemError(error_msg)
    if stiffness is None:
        stiffness = assemble_stiffness(mesh)
    elif stiffness.n != mesh.n_vertices:
        raise IllPosedProblemError(f"Stiffness has size {stiffness.n}, mesh has {mesh.n_vertices} vertices")

    n = mesh.n_vertices
    constrained = np.zeros(n, dtype=bool)
    u = np.zeros(n)
    segment_loads: Dict[SegmentLabel, np.ndarray] = {}

    for condition in spec.conditions:
        if condition.kind == ConditionKind.DIRICHLET:
            u[condition.field.node_ids] = condition.field.values
            constrained[condition.field.node_ids] = True
        else:
            lookup = condition.field.as_mapping()
            for segment in condition.label:
                segment_loads[segment] = _edge_load(mesh, mesh.edge_mask(segment), lookup)

    load = np.zeros(n)
    for segment_load in segment_loads.values():
        load += segment_load

    free = np.flatnonzero(~constrained)
    fixed = np.flatnonzero(constrained)
    if free.size:
        rhs = load[free] - stiffness.submatrix(free, fixed) @ u[fixed]
        u_free, report = conjugate_gradient(stiffness.principal(free), rhs)
        if not report.converged:
            logger.error(f"Mixed solve {spec.describe()} failed: {report}")
            raise SolverError(f"CG did not converge for {spec.describe()}", report)
        u[free] = u_free
    else:
        report = SolveReport(
            iterations=0, relative_residual=0.0, converged=True, tolerance=get_settings().cg_tolerance
        )

    logger.debug(
        f"Solved {spec.describe()}: {free.size} free / {fixed.size} fixed nodes, "
        f"{report.iterations} CG iterations, residual {report.relative_residual:.2e}"
    )
    return FemSolution(
        mesh=mesh,
        nodal_values=u,
        stiffness=stiffness,
        segment_loads=segment_loads,
        dirichlet_nodes=fixed,
        report=report,
    )


def trace(sol: FemSolution, label: LabelLike) -> BoundaryField:
    """Restriction of a solution to a labeled boundary part."""
    nodes = boundary_nodes(sol.mesh, label)
    return BoundaryField(label=label, node_ids=nodes, values=sol.nodal_values[nodes])


def normal_derivative(
    sol: FemSolution,
    label: LabelLike,
    stiffness: Optional[CsrMatrix] = None,
    load: Optional[np.ndarray] = None,
) -> BoundaryField:
    """
    Variational normal derivative of a solution on a labeled boundary part.

    The residual r = K·u − F restricted to the label's nodes holds the flux
    weights ∫ ∂ₙu φ_i ds; solving M_Γ v = r turns them into nodal values.

    Args:
        sol: Solution of a mixed problem
        label: Segment label or union of labels
        stiffness: Stiffness of the solved problem (defaults to the one on ``sol``)
        load: Load of the solved problem; defaults to the Neumann loads of the
            segments outside ``label``

    Returns:
        BoundaryField of ∂ₙu on ``label``

    Raises:
        IncompatibleFieldError: if the label selects no boundary edge
        SolverError: if the boundary mass solve fails
    """
    label = normalize_label(label)
    mesh = sol.mesh
    if not mesh.edge_mask(label).any():
        raise IncompatibleFieldError(f"No boundary edge carries {label_name(label)}; boundary mass is singular")

    if stiffness is None:
        stiffness = sol.stiffness if sol.stiffness is not None else assemble_stiffness(mesh)
    if load is None:
        load = sol.load_excluding(label)

    residual = stiffness.spmv(sol.nodal_values) - np.asarray(load, dtype=float)
    nodes = boundary_nodes(mesh, label)
    values, report = conjugate_gradient(boundary_mass(mesh, label), residual[nodes])
    if not report.converged:
        raise SolverError(f"Boundary mass solve on {label_name(label)} did not converge", report)
    return BoundaryField(label=label, node_ids=nodes, values=values)


def gradient_flux(sol: FemSolution, label: LabelLike) -> BoundaryField:
    """
    Normal derivative from area-averaged element gradients.

    Only used to cross-check ``normal_derivative``.
    """
    mesh = sol.mesh
    tri = mesh.triangles
    p = [mesh.vertices[tri[:, i]] for i in range(3)]
    u = [sol.nodal_values[tri[:, i]] for i in range(3)]
    b = np.column_stack([p[1][:, 1] - p[2][:, 1], p[2][:, 1] - p[0][:, 1], p[0][:, 1] - p[1][:, 1]])
    c = np.column_stack([p[2][:, 0] - p[1][:, 0], p[0][:, 0] - p[2][:, 0], p[1][:, 0] - p[0][:, 0]])
    areas = mesh.signed_areas()
    values = np.column_stack(u)
    gradients = np.column_stack([(b * values).sum(axis=1), (c * values).sum(axis=1)]) / (2.0 * areas)[:, None]

    weighted = np.zeros((mesh.n_vertices, 2))
    weights = np.zeros(mesh.n_vertices)
    for i in range(3):
        np.add.at(weighted, tri[:, i], gradients * areas[:, None])
        np.add.at(weights, tri[:, i], areas)

    nodes = boundary_nodes(mesh, label)
    nodal_gradient = weighted[nodes] / weights[nodes, None]
    normals = boundary_normals(mesh, label)
    return BoundaryField(label=label, node_ids=nodes, values=(nodal_gradient * normals).sum(axis=1))


def l2_boundary_norm(field: BoundaryField, mesh: TriMesh, mass: Optional[CsrMatrix] = None) -> float:
    """
    Boundary L² norm √(vᵀ M_Γ v) of a nodal field.

    Args:
        field: Field on some label of ``mesh``
        mesh: The mesh
        mass: Pre-assembled ``boundary_mass(mesh, field.label)``

    Returns:
        Non-negative norm
    """
    _check_field(mesh, field.label, field)
    if mass is None:
        mass = boundary_mass(mesh, field.label)
    v = field.values
    return float(np.sqrt(max(float(v @ mass.spmv(v)), 0.0)))


def interpolate_boundary(fn: BoundaryFunction, mesh: TriMesh, label: LabelLike) -> BoundaryField:
    """
    Sample a function of (x, y) at the nodes of a labeled boundary part.

    Args:
        fn: Vectorized function of coordinate arrays
        mesh: The mesh
        label: Segment label or union of labels

    Returns:
        BoundaryField of nodal samples
    """
    nodes = boundary_nodes(mesh, label)
    xs, ys = mesh.vertices[nodes, 0], mesh.vertices[nodes, 1]
    values = np.broadcast_to(np.asarray(fn(xs, ys), dtype=float), xs.shape)
    return BoundaryField(label=label, node_ids=nodes, values=values)


def discrete_residual(sol: FemSolution) -> float:
    """
    Relative residual of the discrete weak form at the unconstrained nodes.

    Measured against the reduced right-hand side F − K·u_D, the quantity the
    linear solver drives below its tolerance.
    """
    free = np.setdiff1d(np.arange(sol.mesh.n_vertices), sol.dirichlet_nodes)
    if not free.size:
        return 0.0
    load = sol.total_load()
    lifted = np.zeros(sol.mesh.n_vertices)
    lifted[sol.dirichlet_nodes] = sol.nodal_values[sol.dirichlet_nodes]
    rhs = (load - sol.stiffness.spmv(lifted))[free]
    residual = (sol.stiffness.spmv(sol.nodal_values) - load)[free]
    norm_rhs = float(np.linalg.norm(rhs))
    return float(np.linalg.norm(residual)) / norm_rhs if norm_rhs > 0 else float(np.linalg.norm(residual))


__all__ = [
    "local_stiffness",
    "assemble_stiffness",
    "assemble_neumann_load",
    "boundary_mass",
    "solve_mixed_bvp",
    "trace",
    "normal_derivative",
    "gradient_flux",
    "l2_boundary_norm",
    "interpolate_boundary",
    "discrete_residual",
]
