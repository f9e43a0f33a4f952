"""Helper utility functions."""

import math
import re
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

_PI_PATTERN = re.compile(
    r"^(?P<factor>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<divisor>\d+(?:\.\d*)?|\.\d+))?$"
)


def parse_theta(text: str) -> float:
    """
    Parse an angle given in radians or as a multiple of pi.

    Accepts plain numbers ("0.5236") and forms like "pi/6", "2pi/3", "2*pi/3", "pi".

    Args:
        text: Angle text

    Returns:
        Angle in radians

    Raises:
        ValueError: if the text is not an angle
    """
    cleaned = text.strip().lower().replace("π", "pi")
    match = _PI_PATTERN.match(cleaned)
    if match:
        factor = float(match.group("factor") or 1.0)
        divisor = float(match.group("divisor") or 1.0)
        if divisor == 0:
            raise ValueError(f"Invalid angle '{text}': division by zero")
        return factor * math.pi / divisor
    try:
        return float(cleaned)
    except ValueError:
        raise ValueError(f"Invalid angle '{text}': use radians or a form like pi/6")


def format_theta(theta: Optional[float]) -> str:
    """
    Short display form of an angle, e.g. "pi/6" when it is a simple fraction of pi.

    Args:
        theta: Angle in radians (None for file meshes)

    Returns:
        Display string
    """
    if theta is None:
        return "-"
    for divisor in (1, 2, 3, 4, 5, 6, 8, 12):
        factor = theta * divisor / math.pi
        if abs(factor - round(factor)) < 1e-9 and round(factor) > 0:
            numerator = "pi" if round(factor) == 1 else f"{round(factor)}pi"
            return numerator if divisor == 1 else f"{numerator}/{divisor}"
    return f"{theta:.6g}"


def polar_angle(x: Any, y: Any) -> Any:
    """Polar angle in [0, 2π), elementwise for arrays."""
    return np.mod(np.arctan2(y, x), 2.0 * math.pi)


def format_table(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    """
    Format rows as a plain-text table through pandas.

    Args:
        rows: One dictionary per row
        columns: Column order (defaults to the keys of the first row)

    Returns:
        Table text with a header line; missing values print as "-"
    """
    if not rows:
        return ""
    cleaned = [{key: math.nan if value is None else value for key, value in row.items()} for row in rows]
    frame = pd.DataFrame(cleaned, columns=columns or list(rows[0].keys()))
    return frame.to_string(index=False, float_format=lambda value: f"{value:.4g}", na_rep="-")
