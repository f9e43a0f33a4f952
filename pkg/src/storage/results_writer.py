"""CSV output of experiment runs."""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from config.settings import get_settings
from src.models.kmf import IterationRecord
from src.utils.logger import get_logger

logger = get_logger(__name__)

HISTORY_COLUMNS = ["n", "E", "e_u", "e_v", "solves"]
TRACE_COLUMNS = ["t", "u_exact", "u0", "u_standard", "u_alternating"]
SUMMARY_COLUMNS = ["algorithm", "theta", "iterations", "solves", "converged", "E", "e_u", "e_v"]
COMPARISON_COLUMNS = [
    "theta",
    "iterations_standard",
    "iterations_alternating",
    "iteration_ratio",
    "e_u_standard",
    "e_u_alternating",
    "error_ratio",
]


class ResultsWriter:
    """Writes iteration curves, boundary traces and summaries as CSV files."""

    def __init__(self, output_dir: Optional[Path] = None):
        """
        Initialize the writer.

        Args:
            output_dir: Target directory (defaults to settings)
        """
        settings = get_settings()
        self.output_dir = Path(output_dir or settings.output_path)
        self.float_format = settings.csv_float_format

    def ensure_writable(self) -> None:
        """
        Create the output directory and check it accepts files.

        Raises:
            OSError: if the directory cannot be created or written
        """
        self.output_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(self.output_dir, os.W_OK):
            raise PermissionError(f"Output directory is not writable: {self.output_dir}")
        probe = self.output_dir / ".write_probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()

    def _write(self, frame: pd.DataFrame, filename: str) -> Path:
        path = self.output_dir / filename
        frame.to_csv(path, index=False, float_format=self.float_format, na_rep="", lineterminator="\n")
        logger.info(f"Wrote {path} ({len(frame)} rows)")
        return path

    def write_history(self, algorithm: str, history: Sequence[IterationRecord]) -> Path:
        """Iteration curve ``<algorithm>.csv`` with columns n,E,e_u,e_v,solves."""
        frame = pd.DataFrame([record.to_dict() for record in history], columns=HISTORY_COLUMNS)
        return self._write(frame, f"{algorithm}.csv")

    def write_trace(self, columns: Dict[str, Any]) -> Path:
        """Boundary comparison ``trace.csv``; missing columns are written empty."""
        length = len(columns["t"])
        data = {name: columns.get(name, [float("nan")] * length) for name in TRACE_COLUMNS}
        return self._write(pd.DataFrame(data, columns=TRACE_COLUMNS), "trace.csv")

    def write_summary(self, rows: List[Dict[str, Any]]) -> Path:
        """Per-run summary ``summary.csv``."""
        return self._write(pd.DataFrame(rows, columns=SUMMARY_COLUMNS), "summary.csv")

    def write_comparison(self, rows: List[Dict[str, Any]]) -> Path:
        """Per-θ comparison ``comparison.csv``."""
        return self._write(pd.DataFrame(rows, columns=COMPARISON_COLUMNS), "comparison.csv")
