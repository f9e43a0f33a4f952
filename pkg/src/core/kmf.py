"""Iterative data-completion drivers: the standard and the alternating scheme."""

from typing import List, Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError, IncompatibleFieldError
from src.core.fem import (
    assemble_stiffness,
    boundary_mass,
    l2_boundary_norm,
    normal_derivative,
    solve_mixed_bvp,
    trace,
)
from src.core.mesh import boundary_nodes
from src.models.fields import BoundaryCondition, BoundaryField, FemSolution, MixedBVPSpec
from src.models.kmf import (
    CauchyData,
    CompletionResult,
    IterationRecord,
    KmfOptions,
    StartMode,
)
from src.models.mesh import GAMMA1, SegmentLabel, TriMesh, label_name
from src.utils.logger import get_logger
from src.utils.validators import validate_field_on_mesh

logger = get_logger(__name__)

G11 = SegmentLabel.GAMMA1_1
G12 = SegmentLabel.GAMMA1_2


def relax(new_field: BoundaryField, old_field: BoundaryField, omega: float) -> BoundaryField:
    """
    Affine relaxation ω·new + (1−ω)·old.

    Args:
        new_field: Freshly computed iterate
        old_field: Previous iterate on the same nodes
        omega: Relaxation parameter in (0, 2]

    Returns:
        Relaxed field

    Raises:
        IncompatibleFieldError: if the fields live on different nodes
        ConfigurationError: if omega is outside (0, 2]
    """
    if not new_field.is_compatible(old_field):
        raise IncompatibleFieldError(
            f"Cannot relax {label_name(new_field.label)} ({len(new_field)} nodes) "
            f"against {label_name(old_field.label)} ({len(old_field)} nodes)"
        )
    if not 0.0 < omega <= 2.0:
        raise ConfigurationError(f"Relaxation parameter must lie in (0, 2], got {omega}")
    if omega == 1.0:
        return new_field
    return new_field.with_values(omega * new_field.values + (1.0 - omega) * old_field.values)


def perturb(field: BoundaryField, noise_level: float, seed: int) -> BoundaryField:
    """
    Add seeded Gaussian noise scaled by the field's largest magnitude.

    Args:
        field: Field to perturb
        noise_level: Relative noise level (0 leaves the field unchanged)
        seed: Generator seed; equal seeds give equal noise

    Returns:
        Perturbed field on the same nodes
    """
    if noise_level < 0:
        raise ValueError(f"noise_level must be non-negative, got {noise_level}")
    if noise_level == 0 or not len(field):
        return field.with_values(field.values)
    rng = np.random.default_rng(seed)
    scale = noise_level * float(np.max(np.abs(field.values)))
    return field.with_values(field.values + scale * rng.standard_normal(len(field)))


class CompletionSolver:
    """
    Shared state of one completion run: mesh, stiffness, Cauchy data and norms.

    Every mixed problem of both schemes is a combination of the conditions
    built here; the stiffness matrix is assembled once and reused.
    """

    def __init__(self, mesh: TriMesh, data: CauchyData, opts: KmfOptions):
        """
        Initialize the solver.

        Args:
            mesh: Mesh with labels G0, G11 and G12
            data: Cauchy data on Γ₀
            opts: Stopping and diagnostics options

        Raises:
            IncompatibleFieldError: if the data does not live on the mesh's Γ₀
        """
        for name, field in (("f", data.f), ("g", data.g)):
            is_valid, error_msg = validate_field_on_mesh(mesh, field)
            if not is_valid:
                raise IncompatibleFieldError(f"Cauchy datum {name}: {error_msg}")
        for name, field in (("exact_trace", opts.exact_trace), ("exact_flux", opts.exact_flux)):
            if field is not None:
                is_valid, error_msg = validate_field_on_mesh(mesh, field)
                if not is_valid:
                    raise IncompatibleFieldError(f"{name}: {error_msg}")

        self.mesh = mesh
        self.data = data
        self.opts = opts
        self.stiffness = assemble_stiffness(mesh)
        self.gamma1_mass = boundary_mass(mesh, GAMMA1)

    def solve(self, *conditions: BoundaryCondition) -> FemSolution:
        """Solve one mixed problem with the shared stiffness."""
        return solve_mixed_bvp(self.mesh, MixedBVPSpec(conditions=conditions), self.stiffness)

    def dirichlet_f(self) -> BoundaryCondition:
        return BoundaryCondition.dirichlet(self.data.f)

    def neumann_g(self) -> BoundaryCondition:
        return BoundaryCondition.neumann(self.data.g)

    def distance(self, a: BoundaryField, b: BoundaryField) -> float:
        """‖a − b‖ in L²(Γ₁)."""
        if not a.is_compatible(b):
            raise IncompatibleFieldError(f"Cannot compare {label_name(a.label)} with {label_name(b.label)}")
        return l2_boundary_norm(a.with_values(a.values - b.values), self.mesh, self.gamma1_mass)

    def record(self, n: int, u_n: BoundaryField, u_next: BoundaryField, v_n: BoundaryField, solves: int) -> IterationRecord:
        """Diagnostics of iteration n."""
        e_u = self.distance(u_n, self.opts.exact_trace) if self.opts.exact_trace is not None else None
        e_v = self.distance(v_n, self.opts.exact_flux) if self.opts.exact_flux is not None else None
        return IterationRecord(n=n, E=self.distance(u_n, u_next), e_u=e_u, e_v=e_v, solves_so_far=solves)


def _check_gamma1(mesh: TriMesh, field: BoundaryField, name: str) -> None:
    if field.label != GAMMA1:
        raise IncompatibleFieldError(f"{name} must live on Γ₁ = G11+G12, got {label_name(field.label)}")
    is_valid, error_msg = validate_field_on_mesh(mesh, field)
    if not is_valid:
        raise IncompatibleFieldError(f"{name}: {error_msg}")


def _log_iteration(algorithm: str, record: IterationRecord) -> None:
    extra = ""
    if record.e_u is not None:
        extra += f", e_u={record.e_u:.4e}"
    if record.e_v is not None:
        extra += f", e_v={record.e_v:.4e}"
    logger.debug(f"[{algorithm}] n={record.n}: E={record.E:.4e}{extra}, solves={record.solves_so_far}")


def _finish(algorithm: str, history: List[IterationRecord], converged: bool, opts: KmfOptions) -> None:
    last = history[-1]
    if converged:
        logger.info(f"[{algorithm}] converged after {last.n} iterations (E={last.E:.3e}, {last.solves_so_far} solves)")
    else:
        logger.warning(
            f"[{algorithm}] stopped at the iteration cap {opts.max_iters} with E={last.E:.3e} > {opts.tol_E:.1e}"
        )


def kmf_standard(
    mesh: TriMesh,
    data: CauchyData,
    u0: Optional[BoundaryField] = None,
    opts: Optional[KmfOptions] = None,
    v0: Optional[BoundaryField] = None,
) -> CompletionResult:
    """
    Standard scheme alternating a Dirichlet and a Neumann problem on Γ₁.

    Starting from a Dirichlet guess u0, one problem with u0 on Γ₁ and g on Γ₀
    yields v₀. Each iteration then solves Neumann v on Γ₁ with f on Γ₀
    (giving u) and Dirichlet u on Γ₁ with g on Γ₀ (giving v). Passing ``v0``
    instead starts from a Neumann guess and skips the first problem.

    Args:
        mesh: Mesh labeled G0, G11, G12
        data: Cauchy data f, g on Γ₀
        u0: Dirichlet guess on Γ₁
        opts: Stopping, relaxation and diagnostics options
        v0: Neumann guess on Γ₁ (exclusive with u0)

    Returns:
        CompletionResult; a run hitting the cap is returned with converged=False

    Raises:
        ConfigurationError: unless exactly one of u0, v0 is given
        SolverError: if a mixed solve fails
    """
    if (u0 is None) == (v0 is None):
        raise ConfigurationError("Pass exactly one of u0 (Dirichlet start) or v0 (Neumann start)")
    opts = opts or KmfOptions()
    solver = CompletionSolver(mesh, data, opts)

    def dirichlet_step(u: BoundaryField) -> Tuple[FemSolution, BoundaryField]:
        sol = solver.solve(BoundaryCondition.dirichlet(u), solver.neumann_g())
        return sol, normal_derivative(sol, GAMMA1)

    def neumann_step(v: BoundaryField) -> BoundaryField:
        sol = solver.solve(BoundaryCondition.neumann(v), solver.dirichlet_f())
        return trace(sol, GAMMA1)

    if u0 is not None:
        _check_gamma1(mesh, u0, "u0")
        start_mode = StartMode.DIRICHLET
        base_solves = 1
        final_solution, v = dirichlet_step(u0)
    else:
        _check_gamma1(mesh, v0, "v0")
        start_mode = StartMode.NEUMANN
        base_solves = 0
        final_solution, v = None, v0

    logger.info(
        f"[standard] start from {start_mode.value} guess on Γ₁, tol_E={opts.tol_E:.1e}, "
        f"max_iters={opts.max_iters}, omega={opts.relaxation_omega}"
    )

    u = neumann_step(v)
    history: List[IterationRecord] = []
    converged = False
    for n in range(1, opts.max_iters + 1):
        final_solution, v_new = dirichlet_step(u)
        v = relax(v_new, v, opts.relaxation_omega)
        u_next = neumann_step(v)

        record = solver.record(n, u, u_next, v, base_solves + 2 * n)
        history.append(record)
        _log_iteration("standard", record)
        u_n = u
        if record.E <= opts.tol_E:
            converged = True
            break
        u = u_next

    _finish("standard", history, converged, opts)
    return CompletionResult(
        algorithm="standard",
        start_mode=start_mode,
        u_gamma1=u_n,
        v_gamma1=v,
        history=history,
        converged=converged,
        tol_E=opts.tol_E,
        final_solution=final_solution,
    )


def kmf_alternating(
    mesh: TriMesh,
    data: CauchyData,
    u0: BoundaryField,
    opts: Optional[KmfOptions] = None,
) -> CompletionResult:
    """
    Alternating scheme completing the two halves of Γ₁ in turn.

    Every iteration solves four mixed problems in two passes. The first pass
    (Neumann problem with f, then Dirichlet problem with g) completes the data
    on G11: u₁ and v₁. The second pass starts from the fluxes of the first and
    completes G12: u₂ and v₂. The Neumann field carried to the next iteration
    is the one of the second pass, so each iteration advances the completion
    twice for four solves.

    Args:
        mesh: Mesh labeled G0, G11, G12 with both halves non-empty
        data: Cauchy data f, g on Γ₀
        u0: Dirichlet guess on Γ₁
        opts: Stopping, relaxation and diagnostics options

    Returns:
        CompletionResult with u and v concatenated over Γ₁

    Raises:
        ConfigurationError: if G11 or G12 has no edge
        SolverError: if a mixed solve fails
    """
    for half in (G11, G12):
        if len(boundary_nodes(mesh, half)) < 2:
            raise ConfigurationError(f"Alternating scheme needs a non-empty {half.value} segment")
    _check_gamma1(mesh, u0, "u0")
    opts = opts or KmfOptions()
    solver = CompletionSolver(mesh, data, opts)
    omega = opts.relaxation_omega

    def neumann_halves(v: BoundaryField) -> FemSolution:
        return solver.solve(
            solver.dirichlet_f(),
            BoundaryCondition.neumann(v.restrict(mesh, G11)),
            BoundaryCondition.neumann(v.restrict(mesh, G12)),
        )

    def dirichlet_halves(u: BoundaryField) -> FemSolution:
        return solver.solve(
            solver.neumann_g(),
            BoundaryCondition.dirichlet(u.restrict(mesh, G11)),
            BoundaryCondition.dirichlet(u.restrict(mesh, G12)),
        )

    def advance_u(v: BoundaryField) -> Tuple[BoundaryField, BoundaryField, BoundaryField]:
        # u₁ from the first Neumann problem, u₂ from the second one
        u_first = trace(neumann_halves(v), GAMMA1)
        v_first = relax(normal_derivative(dirichlet_halves(u_first), GAMMA1), v, omega)
        u_second = trace(neumann_halves(v_first), GAMMA1)
        u_n = BoundaryField.concatenate(
            mesh, u_first.restrict(mesh, G11), u_second.restrict(mesh, G12), junction="first"
        )
        return u_n, v_first, u_second

    logger.info(
        f"[alternating] start from Dirichlet guess on Γ₁, tol_E={opts.tol_E:.1e}, "
        f"max_iters={opts.max_iters}, omega={omega}"
    )

    v = normal_derivative(dirichlet_halves(u0), GAMMA1)
    u, v_first, u_second = advance_u(v)

    history: List[IterationRecord] = []
    converged = False
    final_solution = None
    u_n = v_n = None
    for n in range(1, opts.max_iters + 1):
        final_solution = dirichlet_halves(u_second)
        v = relax(normal_derivative(final_solution, GAMMA1), v_first, omega)
        v_n = BoundaryField.concatenate(
            mesh, v_first.restrict(mesh, G11), v.restrict(mesh, G12), junction="mean"
        )

        u_next, v_first_next, u_second_next = advance_u(v)
        record = solver.record(n, u, u_next, v_n, 1 + 4 * n)
        history.append(record)
        _log_iteration("alternating", record)
        u_n = u
        if record.E <= opts.tol_E:
            converged = True
            break
        u, v_first, u_second = u_next, v_first_next, u_second_next

    _finish("alternating", history, converged, opts)
    return CompletionResult(
        algorithm="alternating",
        u_gamma1=u_n,
        v_gamma1=v_n,
        history=history,
        converged=converged,
        tol_E=opts.tol_E,
        final_solution=final_solution,
    )


__all__ = [
    "relax",
    "perturb",
    "CompletionSolver",
    "kmf_standard",
    "kmf_alternating",
]
