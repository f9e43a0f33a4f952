"""Utility modules for the KMF data-completion toolkit."""

from .logger import setup_logger, get_logger
from .helpers import format_table, format_theta, parse_theta, polar_angle

__all__ = [
    "setup_logger",
    "get_logger",
    "format_table",
    "format_theta",
    "parse_theta",
    "polar_angle",
]
