from __future__ import annotations

import numpy as np
import pytest

from anisogreen.core.exceptions import AccuracyError
from anisogreen.services.validation import compare_eigenstructure, dense_eigensolver


def _directions(count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    vectors = rng.normal(size=(count, 3))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def test_jacobi_matches_numpy_on_random_symmetric_matrix():
    rng = np.random.default_rng(4)
    base = rng.normal(size=(5, 5))
    matrix = base + base.T
    values, vectors = dense_eigensolver(matrix)
    assert values == pytest.approx(np.linalg.eigvalsh(matrix), rel=1e-12, abs=1e-12)
    assert np.allclose(vectors.T @ vectors, np.eye(5), atol=1e-12)
    assert np.allclose(matrix @ vectors, vectors * values, atol=1e-11)


def test_jacobi_keeps_diagonal_matrix():
    values, vectors = dense_eigensolver(np.diag([3.0, 1.0, 2.0]))
    assert values.tolist() == [1.0, 2.0, 3.0]
    assert np.array_equal(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_rejects_non_symmetric_input():
    with pytest.raises(ValueError, match="symmetric"):
        dense_eigensolver(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_jacobi_reports_exhausted_sweeps():
    matrix = np.array([[2.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 1.0]])
    with pytest.raises(AccuracyError) as info:
        dense_eigensolver(matrix, max_sweeps=0)
    assert info.value.evaluations == 0


def test_eigenstructure_matches_jacobi_oracle(any_medium):
    for n in _directions(1000, seed=31):
        comparison = compare_eigenstructure(any_medium, n)
        assert comparison.eigenvalue_error <= 1e-10
        assert comparison.vector_error <= 1e-10
        assert comparison.completeness_error <= 1e-12


def test_eigenstructure_comparison_on_symmetry_axis(medium2):
    comparison = compare_eigenstructure(medium2, np.array([0.0, 0.0, 1.0]))
    assert comparison.eigenvalue_error <= 1e-12
    assert comparison.completeness_error == 0.0
