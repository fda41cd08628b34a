from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from anisogreen.core.exceptions import SingularPointError
from anisogreen.schemas.medium import MediumSpec
from anisogreen.services.attenuation import PowerLawExponent, loss_factor, wavenumber
from anisogreen.services.christoffel import mode_constants

# 走时小于该值视为源点
TAU_MIN = 1e-9


@dataclass(frozen=True, slots=True)
class TravelTime:
    b: tuple[float, float, float]
    value: float


def travel_time(b: tuple[float, float, float], x: object) -> float:
    """Ellipsoidal travel time τ(x) = sqrt(Σ x_j²/b_j²)."""

    position = np.asarray(x, dtype=np.float64)
    return math.sqrt(sum((position[j] / b[j]) ** 2 for j in range(3)))


def scalar_solution(
    b: tuple[float, float, float],
    rho: float,
    beta: float,
    gamma: PowerLawExponent | float,
    x: object,
    omega: float,
) -> complex:
    """Φ = (1 − βÂ)·exp(iKτ)/(4π b ρ τ) for velocities b, b = b₁b₂b₃."""

    tau = travel_time(b, x)
    if tau < TAU_MIN:
        raise SingularPointError(
            f"travel time {tau:.3e} s below {TAU_MIN:g} s; the source point is excluded"
        )
    factor = loss_factor(omega, beta, gamma)
    k = wavenumber(omega, beta, gamma).value
    denominator = 4.0 * math.pi * b[0] * b[1] * b[2] * rho * tau
    return factor * cmath.exp(1j * k * tau) / denominator


def phi(medium: MediumSpec, mode: int, x: object, omega: float) -> complex:
    structure = mode_constants(medium, mode)
    return scalar_solution(
        structure.b, medium.rho, medium.beta[mode - 1], medium.gamma, x, omega
    )


def mode_travel_time(medium: MediumSpec, mode: int, x: object) -> TravelTime:
    structure = mode_constants(medium, mode)
    return TravelTime(b=structure.b, value=travel_time(structure.b, x))


__all__ = [
    "TAU_MIN",
    "TravelTime",
    "mode_travel_time",
    "phi",
    "scalar_solution",
    "travel_time",
]
