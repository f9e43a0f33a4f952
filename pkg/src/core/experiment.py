"""Disk experiments: manufactured Cauchy problem, driver runs and reports."""

import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.core.fem import interpolate_boundary, l2_boundary_norm, normal_derivative, solve_mixed_bvp
from src.core.kmf import kmf_alternating, kmf_standard, perturb
from src.core.mesh import describe_mesh, generate_disk_mesh
from src.models.experiment import Algorithm, DiskProblem, ExperimentConfig, FluxData, RunSummary
from src.models.fields import BoundaryCondition, FemSolution, MixedBVPSpec
from src.models.kmf import CauchyData, CompletionResult, KmfOptions
from src.models.mesh import GAMMA1, SegmentLabel, TriMesh
from src.storage.mesh_file import get_mesh_storage
from src.storage.results_writer import COMPARISON_COLUMNS, ResultsWriter
from src.utils.helpers import format_table, format_theta, polar_angle
from src.utils.logger import get_logger

logger = get_logger(__name__)


def exact_solution(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Harmonic function to recover: x² − y²."""
    return x * x - y * y


def exact_flux(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Its normal derivative on the unit circle: 2(2x² − 1)."""
    return 2.0 * (2.0 * x * x - 1.0)


def initial_guess(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Dirichlet starting guess x² − x − ½, far from the solution."""
    return x * x - x - 0.5


def load_or_generate_mesh(config: ExperimentConfig) -> TriMesh:
    """Mesh from ``config.mesh_file`` if given, otherwise a generated disk."""
    if config.mesh_file is not None:
        mesh = get_mesh_storage().load(config.mesh_file)
    else:
        mesh = generate_disk_mesh(config.n_boundary, config.theta)
    logger.info(f"Mesh: {describe_mesh(mesh)}")
    return mesh


def forward_solution(mesh: TriMesh) -> FemSolution:
    """
    Discrete x² − y² on a labeled mesh.

    The trace is imposed on Γ₀ and the exact flux on Γ₁. Its Γ₁ trace is the
    best any completion run can recover on this mesh.

    Args:
        mesh: Mesh labeled G0, G11, G12

    Returns:
        FemSolution of the forward mixed problem
    """
    spec = MixedBVPSpec(conditions=[
        BoundaryCondition.dirichlet(interpolate_boundary(exact_solution, mesh, SegmentLabel.GAMMA0)),
        BoundaryCondition.neumann(interpolate_boundary(exact_flux, mesh, GAMMA1)),
    ])
    return solve_mixed_bvp(mesh, spec)


def build_disk_problem(config: ExperimentConfig) -> DiskProblem:
    """
    Manufactured Cauchy problem on the unit disk.

    f is the trace of x² − y² on Γ₀. By default g samples 2(2x² − 1), which
    is not the flux of any discrete harmonic function, so the iterates level
    off above the discretization error. With ``FluxData.DISCRETE`` g is the
    variational flux on Γ₀ of ``forward_solution``: (f, g) is then an exact
    discrete Cauchy pair and both drivers converge to that solution's Γ₁
    trace. Noise is
    added afterwards (f with ``seed``, g with ``seed + 1``). The initial guess
    on Γ₁ is x² − x − ½.

    Args:
        config: Experiment configuration

    Returns:
        DiskProblem with the mesh, data, guess and exact Γ₁ fields

    Raises:
        MeshError: if the mesh cannot be generated or loaded
    """
    mesh = load_or_generate_mesh(config)
    f = interpolate_boundary(exact_solution, mesh, SegmentLabel.GAMMA0)
    if config.flux_data == FluxData.DISCRETE:
        g = normal_derivative(forward_solution(mesh), SegmentLabel.GAMMA0)
    else:
        g = interpolate_boundary(exact_flux, mesh, SegmentLabel.GAMMA0)
    if config.noise_level > 0:
        f = perturb(f, config.noise_level, config.seed)
        g = perturb(g, config.noise_level, config.seed + 1)
        logger.info(f"Perturbed Cauchy data with relative noise {config.noise_level} (seed {config.seed})")

    return DiskProblem(
        mesh=mesh,
        data=CauchyData(f=f, g=g),
        u0=interpolate_boundary(initial_guess, mesh, GAMMA1),
        exact_trace=interpolate_boundary(exact_solution, mesh, GAMMA1),
        exact_flux=interpolate_boundary(exact_flux, mesh, GAMMA1),
    )


def run_driver(problem: DiskProblem, algorithm: Algorithm, config: ExperimentConfig) -> CompletionResult:
    """Run one completion driver on a problem with the config's stopping rules."""
    opts = KmfOptions(
        tol_E=config.tol_E,
        max_iters=config.max_iters,
        relaxation_omega=config.omega,
        exact_trace=problem.exact_trace,
        exact_flux=problem.exact_flux,
    )
    if algorithm == Algorithm.STANDARD:
        return kmf_standard(problem.mesh, problem.data, problem.u0, opts)
    if algorithm == Algorithm.ALTERNATING:
        return kmf_alternating(problem.mesh, problem.data, problem.u0, opts)
    raise ValueError(f"'{algorithm.value}' is not a single driver")


def format_summary(summaries: Sequence[RunSummary]) -> str:
    """Aligned text version of the run summaries, wall time included."""
    rows = []
    for summary in summaries:
        row = summary.to_dict(include_time=True)
        row["theta"] = format_theta(summary.theta)
        rows.append(row)
    return format_table(rows)


def run_experiment(config: ExperimentConfig, echo: bool = True) -> List[RunSummary]:
    """
    Build the disk problem, run the requested drivers and write CSV output.

    Writes ``<algorithm>.csv`` per driver, ``trace.csv`` with the Γ₁ values of
    the exact solution, the guess and each recovered trace, and ``summary.csv``.

    Args:
        config: Experiment configuration
        echo: Print the aligned summary to stdout

    Returns:
        One RunSummary per driver, in run order

    Raises:
        OSError: if the output directory is not writable (checked before any solve)
    """
    writer = ResultsWriter(config.output_dir)
    writer.ensure_writable()

    logger.info(f"Experiment {config.label}: algorithm={config.algorithm.value}, n_boundary={config.n_boundary}")
    problem = build_disk_problem(config)
    mesh = problem.mesh
    theta = config.theta if config.theta is not None else mesh.theta
    guess_error = l2_boundary_norm(problem.u0.with_values(problem.u0.values - problem.exact_trace.values), mesh)
    logger.info(f"Initial guess error on Γ₁: {guess_error:.3e}")

    nodes = problem.exact_trace.node_ids
    trace_columns: Dict[str, Any] = {
        "t": polar_angle(mesh.vertices[nodes, 0], mesh.vertices[nodes, 1]),
        "u_exact": problem.exact_trace.values,
        "u0": problem.u0.values,
    }

    summaries: List[RunSummary] = []
    for algorithm in config.algorithm.drivers():
        started = time.perf_counter()
        result = run_driver(problem, algorithm, config)
        elapsed = time.perf_counter() - started

        writer.write_history(algorithm.value, result.history)
        trace_columns[f"u_{algorithm.value}"] = result.u_gamma1.values
        summaries.append(RunSummary.from_result(result, theta, elapsed))

        logger.info(f"[{algorithm.value}] {result.iterations} iterations in {elapsed:.2f}s")

    writer.write_trace(trace_columns)
    writer.write_summary([summary.to_dict(include_time=False) for summary in summaries])

    if echo:
        print(format_summary(summaries))
    return summaries


def _final_error(summary: RunSummary) -> Optional[float]:
    return summary.final_e_u if summary.final_e_u is not None else summary.final_E


def _ratio(numerator: Optional[float], denominator: Optional[float]) -> Optional[float]:
    if numerator is None or denominator is None or denominator == 0:
        return None
    return numerator / denominator


def comparison_rows(summaries: Sequence[RunSummary]) -> List[Dict[str, Any]]:
    """
    One row per θ comparing the alternating run against the standard one.

    Args:
        summaries: Run summaries, possibly for several θ

    Returns:
        Rows keyed by the comparison columns; ratios are None when a run is missing
    """
    if not summaries:
        raise ValueError("compare_report needs at least one summary")

    groups: Dict[Any, Dict[str, RunSummary]] = {}
    for summary in summaries:
        groups.setdefault(summary.theta, {})[summary.algorithm] = summary

    rows = []
    for theta, runs in groups.items():
        standard = runs.get(Algorithm.STANDARD.value)
        alternating = runs.get(Algorithm.ALTERNATING.value)
        rows.append({
            "theta": theta,
            "iterations_standard": standard.iterations if standard else None,
            "iterations_alternating": alternating.iterations if alternating else None,
            "iteration_ratio": _ratio(
                alternating.iterations if alternating else None,
                standard.iterations if standard else None,
            ),
            "e_u_standard": _final_error(standard) if standard else None,
            "e_u_alternating": _final_error(alternating) if alternating else None,
            "error_ratio": _ratio(
                _final_error(alternating) if alternating else None,
                _final_error(standard) if standard else None,
            ),
        })
    return rows


def compare_report(summaries: Sequence[RunSummary]) -> str:
    """
    Text table of iteration and final-error ratios (alternating / standard) per θ.

    Args:
        summaries: At least one run summary

    Returns:
        Aligned table text
    """
    rows = comparison_rows(summaries)
    for row in rows:
        row["theta"] = format_theta(row["theta"])
    return format_table(rows, COMPARISON_COLUMNS)


def theta_directory(root: Path, theta: float) -> Path:
    """Per-θ output directory of a sweep, e.g. ``theta_pi_6``."""
    return Path(root) / f"theta_{format_theta(theta).replace('/', '_')}"


def run_sweep(config: ExperimentConfig, thetas: Sequence[float], echo: bool = True) -> List[RunSummary]:
    """
    Run the same experiment for several θ.

    Each θ writes into its own subdirectory; ``comparison.csv`` goes to the
    configured output directory.

    Args:
        config: Template configuration (its theta is replaced)
        thetas: Angles to run
        echo: Print the per-θ summaries and the comparison table

    Returns:
        All run summaries in θ order
    """
    writer = ResultsWriter(config.output_dir)
    writer.ensure_writable()

    summaries: List[RunSummary] = []
    for theta in thetas:
        run_config = config.model_copy(
            update={"theta": theta, "output_dir": theta_directory(config.output_dir, theta)}
        )
        summaries.extend(run_experiment(ExperimentConfig(**run_config.model_dump()), echo=echo))

    writer.write_comparison(comparison_rows(summaries))
    if echo:
        print()
        print(compare_report(summaries))
    return summaries


__all__ = [
    "exact_solution",
    "exact_flux",
    "initial_guess",
    "forward_solution",
    "build_disk_problem",
    "run_driver",
    "run_experiment",
    "format_summary",
    "comparison_rows",
    "compare_report",
    "run_sweep",
]
