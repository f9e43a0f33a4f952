"""Numerical engine: disk meshes, sparse solves, P1 elements and completion drivers."""

from .errors import (
    AssemblyError,
    ConfigurationError,
    IllPosedProblemError,
    IncompatibleFieldError,
    KmfError,
    MeshError,
    MeshParseError,
    MeshValidationError,
    SolverError,
    SparseConstructionError,
)
from .mesh import boundary_measure, boundary_nodes, generate_disk_mesh
from .sparse import CsrMatrix, conjugate_gradient, csr_from_triplets
from .fem import (
    assemble_neumann_load,
    assemble_stiffness,
    interpolate_boundary,
    l2_boundary_norm,
    normal_derivative,
    solve_mixed_bvp,
    trace,
)
from .kmf import kmf_alternating, kmf_standard, perturb, relax

__all__ = [
    "AssemblyError",
    "ConfigurationError",
    "IllPosedProblemError",
    "IncompatibleFieldError",
    "KmfError",
    "MeshError",
    "MeshParseError",
    "MeshValidationError",
    "SolverError",
    "SparseConstructionError",
    "boundary_measure",
    "boundary_nodes",
    "generate_disk_mesh",
    "CsrMatrix",
    "conjugate_gradient",
    "csr_from_triplets",
    "assemble_neumann_load",
    "assemble_stiffness",
    "interpolate_boundary",
    "l2_boundary_norm",
    "normal_derivative",
    "solve_mixed_bvp",
    "trace",
    "kmf_alternating",
    "kmf_standard",
    "perturb",
    "relax",
]
