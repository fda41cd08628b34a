"""Causal power-law loss operator and its frequency symbol.

Fourier convention used throughout the package::

    F[f](omega) = integral f(t) exp(+i omega t) dt

so that exp(+i K tau) with Im K > 0 is an outgoing, decaying wave.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from scipy.special import digamma

from anisogreen.core.exceptions import DomainError, OutOfRegimeError

FOURIER_CONVENTION = "F[f](omega) = integral f(t) exp(+i omega t) dt"
# |γ − round(γ)| 小于该值时按整数处理
INTEGER_TOLERANCE = 1e-12


class ExponentClass(str, Enum):
    """γ 的分类，决定核函数采用哪一支表达式。"""

    EVEN = "even"
    ODD = "odd"
    NON_INTEGER = "non-integer"


@dataclass(frozen=True, slots=True)
class PowerLawExponent:
    gamma: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.gamma) or self.gamma <= 1.0:
            raise DomainError(f"power-law exponent must satisfy gamma > 1, got {self.gamma}")

    @property
    def nearest_integer(self) -> int | None:
        rounded = round(self.gamma)
        if abs(self.gamma - rounded) <= INTEGER_TOLERANCE:
            return int(rounded)
        return None

    @property
    def kind(self) -> ExponentClass:
        integer = self.nearest_integer
        if integer is None:
            return ExponentClass.NON_INTEGER
        return ExponentClass.EVEN if integer % 2 == 0 else ExponentClass.ODD


def as_exponent(gamma: PowerLawExponent | float) -> PowerLawExponent:
    if isinstance(gamma, PowerLawExponent):
        return gamma
    return PowerLawExponent(float(gamma))


def loss_symbol(gamma: PowerLawExponent | float, omega: float) -> complex:
    """Return Â(ω), the Fourier symbol of the loss operator A."""

    exponent = as_exponent(gamma)
    if not math.isfinite(omega):
        raise DomainError(f"omega must be finite, got {omega}")
    if omega == 0.0:
        return 0j

    kind = exponent.kind
    if kind is ExponentClass.EVEN:
        n = exponent.nearest_integer
        assert n is not None
        sign = -1.0 if (n // 2) % 2 == 0 else 1.0
        return sign * (-1j * omega) ** (n - 1)
    if kind is ExponentClass.ODD:
        n = exponent.nearest_integer
        assert n is not None
        sign = 1.0 if ((n + 1) // 2) % 2 == 0 else -1.0
        log_term = float(digamma(n)) - cmath.log(-1j * omega)
        return (2.0 / math.pi) * sign * (1j * omega) ** (n - 1) * log_term
    # 非整数情形：因果幂律核的有限部分 Fourier 变换，取主值分支
    g = exponent.gamma
    return -complex(0.0, -omega) ** (g - 1.0) / math.cos(g * math.pi / 2.0)


@dataclass(frozen=True, slots=True)
class LossSymbol:
    """Â(ω) bound to a fixed exponent."""

    gamma: PowerLawExponent
    convention: str = FOURIER_CONVENTION

    def __call__(self, omega: float) -> complex:
        return loss_symbol(self.gamma, omega)


@dataclass(frozen=True, slots=True)
class ComplexWavenumber:
    omega: float
    beta: float
    gamma: PowerLawExponent
    value: complex

    @property
    def attenuation(self) -> float:
        return self.value.imag


def loss_factor(omega: float, beta: float, gamma: PowerLawExponent | float) -> complex:
    """Return 1 − βÂ(ω) after checking the small-loss regime."""

    exponent = as_exponent(gamma)
    if not math.isfinite(beta) or beta < 0.0:
        raise DomainError(f"loss ratio beta must be >= 0, got {beta}")
    if beta == 0.0:
        return 1.0 + 0j
    scaled = beta * loss_symbol(exponent, omega)
    if abs(scaled) >= 1.0:
        raise OutOfRegimeError(
            f"small-loss regime violated: beta*|A(omega)| = {abs(scaled):.3g} at omega = {omega:g}",
            frequencies=[omega],
        )
    return 1.0 - scaled


def wavenumber(
    omega: float, beta: float, gamma: PowerLawExponent | float
) -> ComplexWavenumber:
    """K = ω·sqrt(1 − βÂ(ω)) on the branch with Im K ≥ 0.

    Multiplying the principal root by ω (rather than |ω|) keeps
    K(−ω) = −conj(K(ω)), which makes exp(iKτ) Hermitian in ω.
    """

    exponent = as_exponent(gamma)
    factor = loss_factor(omega, beta, exponent)
    if beta == 0.0:
        return ComplexWavenumber(omega, beta, exponent, complex(omega, 0.0))
    value = omega * cmath.sqrt(factor)
    if value.imag < 0.0:
        value = -value
    return ComplexWavenumber(omega, beta, exponent, value)


__all__ = [
    "FOURIER_CONVENTION",
    "INTEGER_TOLERANCE",
    "ComplexWavenumber",
    "ExponentClass",
    "LossSymbol",
    "PowerLawExponent",
    "as_exponent",
    "loss_factor",
    "loss_symbol",
    "wavenumber",
]
