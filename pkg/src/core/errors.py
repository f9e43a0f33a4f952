"""Exception hierarchy for the data-completion engine."""

from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from src.models.fields import SolveReport


class KmfError(Exception):
    """Base class for all engine errors."""


class MeshError(KmfError, ValueError):
    """A mesh could not be built, read or validated."""


class MeshParseError(MeshError):
    """A mesh file is malformed."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class MeshValidationError(MeshError):
    """A mesh violates a structural invariant."""


class AssemblyError(KmfError):
    """Finite-element assembly failed (degenerate element, bad labels)."""


class SparseConstructionError(KmfError, ValueError):
    """A sparse matrix was built from out-of-range entries."""


class IllPosedProblemError(KmfError, ValueError):
    """A mixed problem has no Dirichlet part or leaves a segment unassigned."""


class IncompatibleFieldError(KmfError, ValueError):
    """Two boundary fields (or a field and a label) do not live on the same nodes."""


class ConfigurationError(KmfError, ValueError):
    """An algorithm or experiment was configured inconsistently."""


class SolverError(KmfError):
    """The conjugate-gradient solve did not reach its tolerance."""

    def __init__(self, message: str, report: Optional["SolveReport"] = None):
        super().__init__(message)
        self.report = report
