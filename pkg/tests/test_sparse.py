"""Tests for CSR storage and the conjugate-gradient solver."""

import numpy as np
import pytest

from src.core.errors import SparseConstructionError
from src.core.sparse import CsrMatrix, conjugate_gradient, csr_from_arrays, csr_from_triplets


def dense_to_csr(matrix: np.ndarray) -> CsrMatrix:
    rows, cols = np.nonzero(matrix)
    return csr_from_arrays(len(matrix), rows, cols, matrix[rows, cols])


class TestCsrFromTriplets:
    def test_duplicates_are_summed(self):
        A = csr_from_triplets(2, [(0, 0, 1.0), (0, 0, 1.0)])
        assert A.to_dense()[0, 0] == 2.0
        assert A.nnz == 1

    def test_empty_matrix(self):
        A = csr_from_triplets(2, [])
        assert A.n == 2
        np.testing.assert_array_equal(A.spmv(np.array([3.0, 4.0])), [0.0, 0.0])
        np.testing.assert_array_equal(A.row_offsets, [0, 0, 0])

    def test_zero_sum_entries_are_kept(self):
        A = csr_from_triplets(2, [(0, 1, 1.0), (0, 1, -1.0)])
        assert A.nnz == 1
        assert A.values[0] == 0.0

    def test_rows_sorted_and_unique(self):
        A = csr_from_triplets(3, [(1, 2, 1.0), (1, 0, 2.0), (0, 1, 3.0), (1, 2, 4.0)])
        np.testing.assert_array_equal(A.row_offsets, [0, 1, 3, 3])
        np.testing.assert_array_equal(A.col_indices, [1, 0, 2])
        np.testing.assert_array_equal(A.values, [3.0, 2.0, 5.0])

    @pytest.mark.parametrize("entry", [(2, 0, 1.0), (0, 2, 1.0), (-1, 0, 1.0)])
    def test_out_of_range_index(self, entry):
        with pytest.raises(SparseConstructionError):
            csr_from_triplets(2, [entry])

    def test_stored_arrays_are_read_only(self):
        A = csr_from_triplets(2, [(0, 0, 1.0)])
        with pytest.raises(ValueError):
            A.values[0] = 5.0


class TestCsrMatrix:
    def test_spmv_matches_dense(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            dense = rng.standard_normal((20, 20)) * (rng.random((20, 20)) < 0.3)
            x = rng.standard_normal(20)
            expected = dense @ x
            np.testing.assert_allclose(dense_to_csr(dense).spmv(x), expected, rtol=1e-13, atol=1e-13 * np.abs(expected).max())

    def test_transpose_and_symmetry(self):
        A = csr_from_triplets(2, [(0, 1, 1.0), (1, 1, 2.0)])
        assert not A.is_symmetric()
        np.testing.assert_array_equal(A.transpose().to_dense(), A.to_dense().T)
        B = csr_from_triplets(2, [(0, 1, 1.0), (1, 0, 1.0)])
        assert B.is_symmetric()

    def test_submatrix(self):
        dense = np.arange(16, dtype=float).reshape(4, 4)
        A = dense_to_csr(dense)
        np.testing.assert_array_equal(A.submatrix([1, 3], [0, 2]).toarray(), dense[np.ix_([1, 3], [0, 2])])
        np.testing.assert_array_equal(A.principal([2, 3]).to_dense(), dense[2:, 2:])

    def test_diagonal(self):
        A = csr_from_triplets(3, [(0, 0, 4.0), (2, 2, 1.0), (0, 1, 7.0)])
        np.testing.assert_array_equal(A.diagonal(), [4.0, 0.0, 1.0])


class TestConjugateGradient:
    def test_identity(self):
        A = csr_from_triplets(5, [(i, i, 1.0) for i in range(5)])
        b = np.array([1.0, -2.0, 3.0, 0.5, 4.0])
        x, report = conjugate_gradient(A, b)
        np.testing.assert_allclose(x, b)
        assert report.converged
        assert report.iterations <= 1

    def test_two_by_two(self):
        A = csr_from_triplets(2, [(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)])
        x, report = conjugate_gradient(A, np.array([1.0, 2.0]))
        np.testing.assert_allclose(x, [1.0 / 11.0, 7.0 / 11.0], atol=1e-10)
        assert report.converged
        assert report.relative_residual <= report.tolerance

    def test_zero_rhs(self):
        A = csr_from_triplets(2, [(0, 0, 4.0), (1, 1, 3.0)])
        x, report = conjugate_gradient(A, np.zeros(2))
        np.testing.assert_array_equal(x, [0.0, 0.0])
        assert report.iterations == 0
        assert report.converged

    @pytest.mark.parametrize("n", [5, 20, 50])
    def test_random_spd(self, n):
        rng = np.random.default_rng(n)
        M = rng.standard_normal((n, n))
        dense = M.T @ M + np.eye(n)
        b = rng.standard_normal(n)
        x, report = conjugate_gradient(dense_to_csr(dense), b, tol=1e-12)
        assert report.converged
        assert report.iterations <= n + 10
        assert np.linalg.norm(dense @ x - b) <= 1e-12 * np.linalg.norm(b)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(3)
        M = rng.standard_normal((8, 8))
        dense = M.T @ M + np.eye(8)
        b = rng.standard_normal(8)
        perm = rng.permutation(8)
        x, _ = conjugate_gradient(dense_to_csr(dense), b, tol=1e-12)
        y, _ = conjugate_gradient(dense_to_csr(dense[np.ix_(perm, perm)]), b[perm], tol=1e-12)
        np.testing.assert_allclose(y, x[perm], rtol=1e-9, atol=1e-11)

    def test_initial_guess(self):
        A = csr_from_triplets(2, [(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)])
        exact = np.array([1.0 / 11.0, 7.0 / 11.0])
        x, report = conjugate_gradient(A, np.array([1.0, 2.0]), x0=exact)
        np.testing.assert_allclose(x, exact)
        assert report.iterations == 0

    def test_iteration_cap_reports_non_convergence(self):
        rng = np.random.default_rng(11)
        M = rng.standard_normal((30, 30))
        dense = M.T @ M + 1e-3 * np.eye(30)
        x, report = conjugate_gradient(dense_to_csr(dense), rng.standard_normal(30), tol=1e-14, max_iter=2)
        assert not report.converged
        assert report.iterations == 2

    def test_deterministic(self):
        A = csr_from_triplets(3, [(0, 0, 2.0), (1, 1, 3.0), (2, 2, 4.0), (0, 2, 1.0), (2, 0, 1.0)])
        b = np.array([1.0, 2.0, 3.0])
        x1, _ = conjugate_gradient(A, b)
        x2, _ = conjugate_gradient(A, b)
        np.testing.assert_array_equal(x1, x2)
