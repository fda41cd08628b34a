"""Cyclic Jacobi eigensolver for small symmetric matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from anisogreen.core.exceptions import AccuracyError
from anisogreen.schemas.medium import MediumSpec
from anisogreen.services.christoffel import best_assignment, eigenstructure

FloatArray = NDArray[np.float64]

JACOBI_TOLERANCE = 1e-14
# 特征值相对差小于该值时视为同一簇
CLUSTER_TOLERANCE = 1e-8


def dense_eigensolver(
    A: FloatArray, tol: float = JACOBI_TOLERANCE, max_sweeps: int = 50
) -> tuple[FloatArray, FloatArray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of A."""

    matrix = np.array(A, dtype=np.float64)
    size = matrix.shape[0]
    if matrix.shape != (size, size) or not np.array_equal(matrix, matrix.T):
        raise ValueError("dense_eigensolver needs a symmetric square matrix")
    vectors = np.eye(size)
    scale = float(np.linalg.norm(matrix)) or 1.0
    for sweep in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(matrix, 1) ** 2)) * 2.0)
        if off <= tol * scale:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                if matrix[p, q] == 0.0:
                    continue
                theta = (matrix[q, q] - matrix[p, p]) / (2.0 * matrix[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                rotation = np.eye(size)
                rotation[p, p] = rotation[q, q] = c
                rotation[p, q] = s
                rotation[q, p] = -s
                matrix = rotation.T @ matrix @ rotation
                matrix[p, q] = matrix[q, p] = 0.0
                vectors = vectors @ rotation
    else:
        off = math.sqrt(float(np.sum(np.triu(matrix, 1) ** 2)) * 2.0)
        if off > tol * scale:
            raise AccuracyError(
                "Jacobi sweeps exhausted",
                achieved_tolerance=off / scale,
                evaluations=max_sweeps,
            )
    values = np.diag(matrix).copy()
    order = np.argsort(values)
    return values[order], vectors[:, order]


@dataclass(frozen=True, slots=True)
class EigenComparison:
    eigenvalue_error: float
    vector_error: float
    completeness_error: float


def compare_eigenstructure(
    medium: MediumSpec, n: FloatArray, max_sweeps: int = 50
) -> EigenComparison:
    """Compare closed-form (L_i, D_i) with the Jacobi eigenpairs along n."""

    value = eigenstructure(medium, n)
    numeric_values, numeric_vectors = dense_eigensolver(value.gamma_c, max_sweeps=max_sweeps)
    scale = max(abs(item) for item in value.eigenvalues) or 1.0
    order = best_assignment(value.eigenvalues, numeric_values)
    eigenvalue_error = max(
        abs(value.eigenvalues[i] - numeric_values[order[i]]) / scale for i in range(3)
    )

    vector_error = 0.0
    completeness = np.zeros((3, 3))
    for i in range(3):
        if value.degenerate[i]:
            continue
        target = numeric_values[order[i]]
        cluster = [
            j
            for j in range(3)
            if abs(numeric_values[j] - target) <= CLUSTER_TOLERANCE * scale
        ]
        basis = numeric_vectors[:, cluster]
        projector = basis @ basis.T
        unit = value.eigenvectors[i] / math.sqrt(value.normalizers[i])
        vector_error = max(vector_error, float(np.linalg.norm(projector @ unit - unit)))
        completeness += value.projector(i)
    if any(value.degenerate):
        completeness_error = 0.0
    else:
        completeness_error = float(np.linalg.norm(completeness - np.eye(3)))
    return EigenComparison(eigenvalue_error, vector_error, completeness_error)


__all__ = ["EigenComparison", "compare_eigenstructure", "dense_eigensolver"]
