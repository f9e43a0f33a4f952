"""Compressed sparse row storage and a Jacobi-preconditioned conjugate-gradient solver."""

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from config.settings import get_settings
from src.core.errors import SparseConstructionError
from src.models.fields import SolveReport
from src.utils.logger import get_logger

logger = get_logger(__name__)


class CsrMatrix:
    """Immutable square sparse matrix in CSR layout."""

    def __init__(self, matrix: sparse.csr_matrix):
        """
        Wrap a canonical scipy CSR matrix.

        Args:
            matrix: Square matrix; duplicates are summed and columns sorted
        """
        matrix = sparse.csr_matrix(matrix, dtype=float, copy=True)
        if matrix.shape[0] != matrix.shape[1]:
            raise SparseConstructionError(f"CSR matrix must be square, got {matrix.shape}")
        matrix.sum_duplicates()
        matrix.sort_indices()
        if not np.all(np.isfinite(matrix.data)):
            raise SparseConstructionError("CSR matrix values must be finite")
        for array in (matrix.data, matrix.indices, matrix.indptr):
            array.flags.writeable = False
        self._matrix = matrix

    @property
    def n(self) -> int:
        """Dimension."""
        return self._matrix.shape[0]

    @property
    def row_offsets(self) -> np.ndarray:
        """Row pointer array of length n + 1."""
        return self._matrix.indptr

    @property
    def col_indices(self) -> np.ndarray:
        """Column index of every stored value."""
        return self._matrix.indices

    @property
    def values(self) -> np.ndarray:
        """Stored values."""
        return self._matrix.data

    @property
    def nnz(self) -> int:
        """Number of stored entries (explicit zeros included)."""
        return self._matrix.nnz

    @property
    def scipy(self) -> sparse.csr_matrix:
        """Underlying scipy matrix (read-only arrays)."""
        return self._matrix

    def spmv(self, x: np.ndarray) -> np.ndarray:
        """Matrix-vector product."""
        return self._matrix @ np.asarray(x, dtype=float)

    def __matmul__(self, x: np.ndarray) -> np.ndarray:
        return self.spmv(x)

    def diagonal(self) -> np.ndarray:
        """Main diagonal."""
        return self._matrix.diagonal()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> sparse.csr_matrix:
        """Rectangular block A[rows, cols] as a scipy CSR matrix."""
        return self._matrix[np.asarray(rows)][:, np.asarray(cols)].tocsr()

    def principal(self, indices: Sequence[int]) -> "CsrMatrix":
        """Square block A[indices, indices]."""
        return CsrMatrix(self.submatrix(indices, indices))

    def transpose(self) -> "CsrMatrix":
        """Transposed matrix."""
        return CsrMatrix(self._matrix.transpose().tocsr())

    def to_dense(self) -> np.ndarray:
        """Dense copy."""
        return self._matrix.toarray()

    def is_symmetric(self, tol: float = 1e-14) -> bool:
        """Whether max |A − Aᵀ| ≤ tol."""
        difference = self._matrix - self._matrix.transpose()
        return difference.nnz == 0 or float(np.max(np.abs(difference.data))) <= tol

    def __repr__(self) -> str:
        return f"CsrMatrix(n={self.n}, nnz={self.nnz})"


def csr_from_triplets(n: int, entries: Iterable[Tuple[int, int, float]]) -> CsrMatrix:
    """
    Build a CSR matrix from (row, col, value) triplets.

    Duplicates are summed; entries summing to zero stay stored.

    Args:
        n: Dimension
        entries: Iterable of (row, col, value)

    Returns:
        CsrMatrix of size n × n

    Raises:
        SparseConstructionError: if an index lies outside [0, n)
    """
    triplets = list(entries)
    if triplets:
        rows, cols, vals = (np.asarray(column) for column in zip(*triplets))
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        vals = np.zeros(0)
    return csr_from_arrays(n, rows, cols, vals)


def csr_from_arrays(n: int, rows: np.ndarray, cols: np.ndarray, vals: np.ndarray) -> CsrMatrix:
    """
    Vectorized form of ``csr_from_triplets`` taking parallel arrays.

    Args:
        n: Dimension
        rows: Row indices
        cols: Column indices
        vals: Values

    Returns:
        CsrMatrix of size n × n
    """
    rows = np.asarray(rows, dtype=np.int64).ravel()
    cols = np.asarray(cols, dtype=np.int64).ravel()
    vals = np.asarray(vals, dtype=float).ravel()
    if not len(rows) == len(cols) == len(vals):
        raise SparseConstructionError("Triplet arrays must have equal length")
    for name, index in (("row", rows), ("column", cols)):
        if index.size and (index.min() < 0 or index.max() >= n):
            bad = index[(index < 0) | (index >= n)][0]
            raise SparseConstructionError(f"{name} index {int(bad)} outside [0, {n})")
    return CsrMatrix(sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr())


def conjugate_gradient(
    A: CsrMatrix,
    b: np.ndarray,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    x0: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, SolveReport]:
    """
    Solve A x = b for symmetric positive definite A with Jacobi-preconditioned CG.

    Convergence is accepted only on the true residual ‖b − A x‖ ≤ tol·‖b‖;
    when the recursive residual passes but the true one does not, the
    iteration restarts from the current iterate.

    Args:
        A: SPD matrix
        b: Right-hand side
        tol: Relative residual tolerance (defaults to settings)
        max_iter: Iteration cap (defaults to factor · n from settings)
        x0: Optional initial guess

    Returns:
        Tuple of (solution, SolveReport); a non-converged report is returned, not raised
    """
    settings = get_settings()
    tol = settings.cg_tolerance if tol is None else tol
    if tol <= 0:
        raise ValueError("CG tolerance must be positive")
    if max_iter is None:
        max_iter = settings.cg_max_iter_factor * max(A.n, 1)

    b = np.asarray(b, dtype=float)
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        return np.zeros(A.n), SolveReport(iterations=0, relative_residual=0.0, converged=True, tolerance=tol)

    diagonal = A.diagonal()
    inv_diag = np.where(diagonal > 0, 1.0 / np.where(diagonal > 0, diagonal, 1.0), 1.0)

    x = np.zeros(A.n) if x0 is None else np.array(x0, dtype=float)
    r = b - A.spmv(x)
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    threshold = tol * norm_b

    iterations = 0
    true_norm = float(np.linalg.norm(r))
    while true_norm > threshold and iterations < max_iter:
        Ap = A.spmv(p)
        curvature = float(p @ Ap)
        if curvature <= 0.0:
            logger.warning(f"CG met non-positive curvature {curvature:.3e}; matrix is not SPD")
            break
        alpha = rz / curvature
        x += alpha * p
        r -= alpha * Ap
        iterations += 1

        if np.linalg.norm(r) <= threshold:
            r = b - A.spmv(x)
            true_norm = float(np.linalg.norm(r))
            if true_norm <= threshold:
                break
            # Recursive residual drifted; restart from the true one
            z = inv_diag * r
            p = z.copy()
            rz = float(r @ z)
            continue

        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        true_norm = float(np.linalg.norm(r))

    relative = float(np.linalg.norm(b - A.spmv(x))) / norm_b
    report = SolveReport(
        iterations=iterations,
        relative_residual=relative,
        converged=relative <= tol,
        tolerance=tol,
    )
    if not report.converged:
        logger.warning(
            f"CG stopped after {iterations} iterations at relative residual {relative:.3e} (tol {tol:.1e})"
        )
    return x, report
