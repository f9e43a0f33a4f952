"""Configuration management for the KMF data-completion toolkit."""

import os
from typing import Optional
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings:
    """Application settings loaded from environment variables."""

    def __init__(self):
        """Initialize settings from environment variables."""
        # Linear solver configuration
        self.cg_tolerance: float = float(os.getenv("KMF_CG_TOLERANCE", "1e-10"))
        self.cg_max_iter_factor: int = int(os.getenv("KMF_CG_MAX_ITER_FACTOR", "10"))

        # Iteration defaults (stopping threshold on E and iteration cap)
        self.stop_tolerance: float = float(os.getenv("KMF_STOP_TOLERANCE", "1e-5"))
        self.max_iterations: int = int(os.getenv("KMF_MAX_ITERATIONS", "1000"))

        # Mesh generation
        self.default_n_boundary: int = int(os.getenv("KMF_N_BOUNDARY", "128"))
        self.smoothing_sweeps: int = int(os.getenv("KMF_SMOOTHING_SWEEPS", "8"))

        # Output. The directory is created by the run, not here, so that an
        # unwritable path is reported before any solve starts.
        self.output_path: Path = Path(os.getenv("KMF_OUTPUT_PATH", "./results"))
        self.csv_float_format: str = "%.12g"
        self.mesh_float_format: str = "%.17g"

        # Logging Configuration
        self.log_level: str = os.getenv("LOG_LEVEL", "INFO")
        log_file = os.getenv("LOG_FILE", "./logs/kmf_completion.log")
        self.log_file: Path = Path(log_file)

    def validate(self) -> tuple[bool, Optional[str]]:
        """
        Validate that the numerical settings are usable.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not 0 < self.cg_tolerance < 1:
            return False, "KMF_CG_TOLERANCE must be in (0, 1)."

        if self.cg_max_iter_factor < 1:
            return False, "KMF_CG_MAX_ITER_FACTOR must be at least 1."

        if self.stop_tolerance <= 0:
            return False, "KMF_STOP_TOLERANCE must be positive."

        if self.max_iterations < 1:
            return False, "KMF_MAX_ITERATIONS must be at least 1."

        if self.default_n_boundary < 8:
            return False, "KMF_N_BOUNDARY must be at least 8."

        if self.smoothing_sweeps < 0:
            return False, "KMF_SMOOTHING_SWEEPS cannot be negative."

        return True, None


# Singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get the global settings instance (singleton pattern).

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
