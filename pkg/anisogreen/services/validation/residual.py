"""Finite-difference residual of the viscoelastic wave operator.

The operator coefficients come from the Voigt table (elastic part) and
from polarizing the viscosity tensor (viscous part); sampled Green
tensors are differentiated with central stencils only.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from functools import partial

import numpy as np
from numpy.typing import NDArray

from anisogreen.core.exceptions import GeometryError, NonLocalViscosityError
from anisogreen.core.logging_config import get_logger
from anisogreen.schemas.medium import MediumSpec
from anisogreen.schemas.validation import OracleConfig, ResidualReport
from anisogreen.services.attenuation import loss_symbol
from anisogreen.services.christoffel import (
    VOIGT_INDEX,
    mode_constants,
    stiffness_voigt,
    viscosity_tensor,
)

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]
FieldSampler = Callable[[FloatArray], ComplexArray]

logger = get_logger("anisogreen.validation.residual")

# 模板最远点到源点的最小距离（以 h 计）
SOURCE_CLEARANCE = 10.0
# 最细步长不得超过局部长度尺度的 1/50
RESOLUTION_RATIO = 50.0
QUADRATIC_CHECK_TOLERANCE = 1e-10

# 二阶导数模板：(偏移, 权重)，分母为 h²
_SECOND = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)),
}
# 一阶导数模板，分母为 h
_FIRST = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
}


def elastic_coefficients(medium: MediumSpec) -> FloatArray:
    """T[i, m, k, l] with Γᶜ(∇)_im = Σ_kl T[i, m, k, l] ∂_k ∂_l."""

    table = stiffness_voigt(medium)
    result = np.zeros((3, 3, 3, 3))
    for i in range(3):
        for m in range(3):
            for k in range(3):
                for l in range(3):
                    result[i, m, k, l] = 0.5 * (
                        table[VOIGT_INDEX[k][i], VOIGT_INDEX[l][m]]
                        + table[VOIGT_INDEX[l][i], VOIGT_INDEX[k][m]]
                    )
    return result


def viscous_coefficients(medium: MediumSpec, samples: int = 8, seed: int = 1) -> FloatArray:
    """Quadratic coefficients of Γᵛ(n); fails when Γᵛ is not a polynomial in n."""

    basis = np.eye(3)
    diagonal = [viscosity_tensor(medium, basis[k]) for k in range(3)]
    result = np.zeros((3, 3, 3, 3))
    for k in range(3):
        result[:, :, k, k] = diagonal[k]
        for l in range(k + 1, 3):
            mixed = viscosity_tensor(medium, basis[k] + basis[l])
            cross = 0.5 * (mixed - diagonal[k] - diagonal[l])
            result[:, :, k, l] = cross
            result[:, :, l, k] = cross

    rng = np.random.default_rng(seed)
    for direction in rng.normal(size=(samples, 3)):
        expected = viscosity_tensor(medium, direction)
        rebuilt = np.einsum("imkl,k,l->im", result, direction, direction)
        scale = float(np.linalg.norm(expected)) or 1.0
        if np.linalg.norm(expected - rebuilt) > QUADRATIC_CHECK_TOLERANCE * scale:
            raise NonLocalViscosityError(
                "viscosity tensor is not quadratic in the direction; unequal shear loss "
                "ratios make the viscous operator non-local for this medium"
            )
    return result


class _StencilSampler:
    """按整数偏移缓存场值，避免重复求值。"""

    def __init__(self, field: FieldSampler, x: FloatArray, h: float) -> None:
        self._field = field
        self._x = x
        self._h = h
        self._cache: dict[tuple[int, int, int], ComplexArray] = {}

    def __call__(self, offset: tuple[int, int, int]) -> ComplexArray:
        if offset not in self._cache:
            point = self._x + self._h * np.asarray(offset, dtype=np.float64)
            self._cache[offset] = np.asarray(self._field(point), dtype=np.complex128)
        return self._cache[offset]


def _second_derivatives(
    sampler: _StencilSampler, h: float, order: int
) -> dict[tuple[int, int], ComplexArray]:
    result: dict[tuple[int, int], ComplexArray] = {}
    for k in range(3):
        total = 0.0
        for shift, weight in _SECOND[order]:
            offset = [0, 0, 0]
            offset[k] = shift
            total = total + weight * sampler((offset[0], offset[1], offset[2]))
        result[(k, k)] = total / h**2
        for l in range(k + 1, 3):
            total = 0.0
            for shift_k, weight_k in _FIRST[order]:
                for shift_l, weight_l in _FIRST[order]:
                    offset = [0, 0, 0]
                    offset[k] = shift_k
                    offset[l] = shift_l
                    total = total + weight_k * weight_l * sampler(
                        (offset[0], offset[1], offset[2])
                    )
            result[(k, l)] = result[(l, k)] = total / h**2
    return result


def apply_operator(
    medium: MediumSpec,
    field: FieldSampler,
    x: Sequence[float],
    omega: float,
    h: float,
    order: int = 4,
    source: Sequence[float] = (0.0, 0.0, 0.0),
) -> ComplexArray:
    """Γᶜ(∇)u + Â(ω)Γᵛ(∇)u + ρω²u at x, derivatives by central differences."""

    position = np.asarray(x, dtype=np.float64)
    reach = math.sqrt(2.0) * (order // 2) * h
    distance = float(np.linalg.norm(position - np.asarray(source, dtype=np.float64)))
    if distance < max(SOURCE_CLEARANCE * h, reach):
        raise GeometryError(
            f"stencil at {position.tolist()} with h={h:g} comes within "
            f"{SOURCE_CLEARANCE:g}h of the source"
        )
    coefficients = elastic_coefficients(medium).astype(np.complex128)
    if any(beta > 0.0 for beta in medium.beta):
        coefficients = coefficients + loss_symbol(medium.gamma, omega) * viscous_coefficients(
            medium
        )
    sampler = _StencilSampler(field, position, h)
    derivatives = _second_derivatives(sampler, h, order)
    result = medium.rho * omega**2 * sampler((0, 0, 0))
    for k in range(3):
        for l in range(3):
            result = result + coefficients[:, :, k, l] @ derivatives[(k, l)]
    return result


def resolution_scale(medium: MediumSpec, x: Sequence[float], omega: float) -> float:
    """Shortest length the field varies on at x: distance to the source or b_min/|ω|."""

    distance = float(np.linalg.norm(np.asarray(x, dtype=np.float64)))
    if omega == 0.0:
        return distance
    slowest = min(min(mode_constants(medium, mode).b) for mode in (1, 2, 3))
    return min(distance, slowest / abs(omega))


def fd_residual(
    medium: MediumSpec,
    field: FieldSampler,
    x: Sequence[float] | Sequence[Sequence[float]],
    omega: float,
    config: OracleConfig | None = None,
) -> ResidualReport:
    """Normalized residual ‖R‖/‖ρω²u‖ over dyadic spacings, per point."""

    config = config or OracleConfig()
    points = np.atleast_2d(np.asarray(x, dtype=np.float64))
    spacings = config.spacings()
    finest = spacings[-1]
    for point in points:
        scale = resolution_scale(medium, point, omega)
        if finest * RESOLUTION_RATIO > scale:
            raise GeometryError(
                f"spacing h={finest:g} does not resolve the field at {point.tolist()}: "
                f"need h <= {scale / RESOLUTION_RATIO:.3g}"
            )
    residuals: list[list[float]] = []
    slopes: list[float] = []
    for point in points:
        row = []
        reference = medium.rho * omega**2 * float(
            np.linalg.norm(np.asarray(field(point)))
        )
        for h in spacings:
            value = apply_operator(medium, field, point, omega, h, config.fd_order)
            row.append(float(np.linalg.norm(value)) / reference)
        slope = float(np.polyfit(np.log2(spacings), np.log2(row), 1)[0])
        residuals.append(row)
        slopes.append(slope)
        logger.debug("残差 %s: %s, 斜率 %.2f", point.tolist(), row, slope)
    return ResidualReport(
        points=[(float(p[0]), float(p[1]), float(p[2])) for p in points],
        omega=omega,
        beta=medium.beta,
        fd_order=config.fd_order,
        spacings=spacings,
        residuals=residuals,
        slopes=slopes,
    )


def green_sampler(medium: MediumSpec, omega: float) -> FieldSampler:
    from anisogreen.services.green import green_tensor

    def sample(point: FloatArray, *, medium: MediumSpec, omega: float) -> ComplexArray:
        return green_tensor(medium, point, omega).G

    return partial(sample, medium=medium, omega=omega)


def fd_hessian(
    function: Callable[[FloatArray], float], x: Sequence[float], h: float
) -> FloatArray:
    """Fourth-order central-difference Hessian of a scalar function."""

    position = np.asarray(x, dtype=np.float64)
    cache: dict[tuple[int, int, int], float] = {}

    def value(offset: tuple[int, int, int]) -> float:
        if offset not in cache:
            cache[offset] = float(function(position + h * np.asarray(offset, dtype=float)))
        return cache[offset]

    result = np.zeros((3, 3))
    for k in range(3):
        total = 0.0
        for shift, weight in _SECOND[4]:
            offset = [0, 0, 0]
            offset[k] = shift
            total += weight * value((offset[0], offset[1], offset[2]))
        result[k, k] = total / h**2
        for l in range(k + 1, 3):
            total = 0.0
            for shift_k, weight_k in _FIRST[4]:
                for shift_l, weight_l in _FIRST[4]:
                    offset = [0, 0, 0]
                    offset[k] = shift_k
                    offset[l] = shift_l
                    total += weight_k * weight_l * value((offset[0], offset[1], offset[2]))
            result[k, l] = result[l, k] = total / h**2
    return result


__all__ = [
    "apply_operator",
    "elastic_coefficients",
    "fd_hessian",
    "fd_residual",
    "green_sampler",
    "resolution_scale",
    "viscous_coefficients",
]
