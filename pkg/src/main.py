"""Command-line entry point for the disk data-completion experiments."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add project root to Python path
project_root_str = str(Path(__file__).resolve().parent.parent)
if project_root_str not in sys.path:
    sys.path.insert(0, project_root_str)

from pydantic import ValidationError

from config.settings import get_settings
from src.core.errors import KmfError
from src.core.experiment import run_experiment, run_sweep
from src.models.experiment import Algorithm, ExperimentConfig, FluxData
from src.utils.helpers import parse_theta
from src.utils.logger import setup_logger

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of the experiment runner."""
    settings = get_settings()
    parser = argparse.ArgumentParser(
        description="Recover missing Cauchy data on the unit disk with the standard and alternating KMF schemes."
    )
    parser.add_argument(
        "--theta",
        nargs="+",
        type=parse_theta,
        help="Opening angle of the inaccessible arc: radians or pi/6, pi/4, ... Several values run a sweep.",
    )
    parser.add_argument(
        "--n-boundary",
        type=int,
        default=settings.default_n_boundary,
        help="Number of boundary nodes of the generated disk.",
    )
    parser.add_argument(
        "--algorithm",
        choices=[a.value for a in Algorithm],
        default=Algorithm.BOTH.value,
        help="Driver(s) to run.",
    )
    parser.add_argument("--tol", type=float, default=settings.stop_tolerance, help="Stopping threshold on E.")
    parser.add_argument("--max-iters", type=int, default=settings.max_iterations, help="Iteration cap.")
    parser.add_argument("--noise", type=float, default=0.0, help="Relative noise level on f and g.")
    parser.add_argument("--seed", type=int, default=0, help="Noise seed.")
    parser.add_argument(
        "--flux-data",
        choices=[f.value for f in FluxData],
        default=FluxData.INTERPOLATED.value,
        help="Manufacture g as the discrete flux of the forward solve or sample the exact flux.",
    )
    parser.add_argument("--omega", type=float, default=1.0, help="Relaxation parameter of the Neumann update.")
    parser.add_argument("--out", type=Path, default=settings.output_path, help="Output directory for CSV files.")
    parser.add_argument("--mesh-file", type=Path, default=None, help="Load this mesh instead of generating a disk.")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Override LOG_LEVEL.",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the experiment(s) described by the command line.

    Returns:
        0 if every run converged, 2 if some run did not, 1 on error
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors, which is reserved for non-convergence
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    logger = setup_logger(level=args.log_level)

    is_valid, error_msg = get_settings().validate()
    if not is_valid:
        logger.error(f"Invalid settings: {error_msg}")
        return EXIT_ERROR

    thetas = args.theta or []
    if not thetas and args.mesh_file is None:
        logger.error("Either --theta or --mesh-file is required")
        return EXIT_ERROR

    try:
        config = ExperimentConfig(
            theta=thetas[0] if thetas else None,
            n_boundary=args.n_boundary,
            algorithm=Algorithm(args.algorithm),
            tol_E=args.tol,
            max_iters=args.max_iters,
            noise_level=args.noise,
            seed=args.seed,
            flux_data=FluxData(args.flux_data),
            omega=args.omega,
            output_dir=args.out,
            mesh_file=args.mesh_file,
        )
        if len(thetas) > 1:
            summaries = run_sweep(config, thetas)
        else:
            summaries = run_experiment(config)
    except ValidationError as e:
        logger.error(f"Invalid experiment configuration: {e}")
        return EXIT_ERROR
    except (KmfError, OSError, ValueError) as e:
        logger.error(f"Experiment failed: {e}", exc_info=True)
        return EXIT_ERROR

    not_converged = [s for s in summaries if not s.converged]
    if not_converged:
        names = ", ".join(f"{s.algorithm} (theta={s.theta})" for s in not_converged)
        logger.warning(f"Not converged: {names}")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
