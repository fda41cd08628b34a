"""Numerical Fourier transform of the causal power-law loss kernel.

Non-integer and odd exponents integrate the kernel t^(−γ) as a Hadamard
finite part: the near window [0, a] is regularized by subtracting Taylor
terms of exp(iωt), the tail [a, ∞) uses an oscillatory Fourier
quadrature. Even exponents use a Gaussian-smoothed derivative of δ.
Each estimate is repeated with the window halved; the difference is the
reported error.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from anisogreen.core.exceptions import AccuracyError, DomainError
from anisogreen.core.logging_config import get_logger
from anisogreen.services.attenuation import ExponentClass, PowerLawExponent, as_exponent

logger = get_logger("anisogreen.validation.kernel_ft")

KERNEL_RTOL = 1e-8


@dataclass(frozen=True, slots=True)
class KernelTransform:
    value: complex
    error: float
    window: float


def _quad_complex(
    func: Callable[[float], complex], a: float, b: float, **kwargs: Any
) -> tuple[complex, float]:
    real, real_err = quad(lambda t: func(t).real, a, b, **kwargs)[:2]
    imag, imag_err = quad(lambda t: func(t).imag, a, b, **kwargs)[:2]
    return complex(real, imag), math.hypot(real_err, imag_err)


def _taylor_remainder(omega: float, terms: int, t: float) -> complex:
    """(e^{iωt} − Σ_{k<terms}(iωt)^k/k!) / t^terms."""

    z = 1j * omega * t
    if abs(z) < 1.0:
        total = 0j
        term = (1j * omega) ** terms / math.factorial(terms)
        for j in range(40):
            total += term
            term *= z / (terms + j + 1)
            if abs(term) <= 1e-18 * abs(total):
                break
        return total
    partial = sum(z**k / math.factorial(k) for k in range(terms))
    return (cmath.exp(z) - partial) / t**terms


def _finite_part(gamma: float, omega: float, window: float, limit: int) -> complex:
    terms = int(math.floor(gamma - 1.0)) + 1
    alpha = terms - gamma
    near_real = quad(
        lambda t: _taylor_remainder(omega, terms, t).real,
        0.0,
        window,
        weight="alg",
        wvar=(alpha, 0.0),
        limit=limit,
        epsabs=0.0,
        epsrel=1e-13,
    )[0]
    near_imag = quad(
        lambda t: _taylor_remainder(omega, terms, t).imag,
        0.0,
        window,
        weight="alg",
        wvar=(alpha, 0.0),
        limit=limit,
        epsabs=0.0,
        epsrel=1e-13,
    )[0]
    frequency = abs(omega)
    sign = 1.0 if omega > 0.0 else -1.0
    tail_cos = quad(
        lambda t: t ** (-gamma),
        window,
        np.inf,
        weight="cos",
        wvar=frequency,
        limlst=100,
        epsabs=1e-14,
    )[0]
    tail_sin = quad(
        lambda t: t ** (-gamma),
        window,
        np.inf,
        weight="sin",
        wvar=frequency,
        limlst=100,
        epsabs=1e-14,
    )[0]
    boundary = 0j
    for k in range(terms):
        power = k - gamma + 1.0
        if abs(power) < 1e-12:
            moment = math.log(window)
        else:
            moment = window**power / power
        boundary += (1j * omega) ** k / math.factorial(k) * moment
    return complex(near_real, near_imag) + complex(tail_cos, sign * tail_sin) + boundary


def _derivative(order: int, t: float, step: float, sigma: float) -> float:
    def g(u: float) -> float:
        return math.exp(-0.5 * (u / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))

    if order == 1:
        return (-g(t + 2 * step) + 8 * g(t + step) - 8 * g(t - step) + g(t - 2 * step)) / (
            12.0 * step
        )
    if order == 3:
        return (
            -g(t + 3 * step)
            + 8 * g(t + 2 * step)
            - 13 * g(t + step)
            + 13 * g(t - step)
            - 8 * g(t - 2 * step)
            + g(t - 3 * step)
        ) / (8.0 * step**3)
    raise DomainError(f"even exponents are supported up to 4, derivative order {order}")


def _smoothed_derivative_transform(order: int, omega: float, sigma: float) -> complex:
    span = 12.0 * sigma

    def transform(step: float) -> complex:
        value, _ = _quad_complex(
            lambda t: _derivative(order, t, step, sigma) * cmath.exp(1j * omega * t),
            -span,
            span,
            epsabs=0.0,
            epsrel=1e-13,
            limit=200,
        )
        return value

    step = sigma / 40.0
    # 差分步长的 Richardson 外推
    return (16.0 * transform(0.5 * step) - transform(step)) / 15.0


def _even_transform(n: int, omega: float, window: float) -> complex:
    order = n - 1
    sign = -1.0 if (n // 2) % 2 == 0 else 1.0
    coarse = _smoothed_derivative_transform(order, omega, window)
    fine = _smoothed_derivative_transform(order, omega, 0.5 * window)
    # 高斯宽度的 Richardson 外推，消去 σ² 项
    return sign * (4.0 * fine - coarse) / 3.0


def kernel_ft_oracle(
    gamma: PowerLawExponent | float,
    omega: float,
    window: float | None = None,
    limit: int = 200,
    rtol: float = KERNEL_RTOL,
) -> KernelTransform:
    """Transform ∫ k(t) e^{iωt} dt of the loss kernel with an error estimate."""

    exponent = as_exponent(gamma)
    if not math.isfinite(omega) or omega == 0.0:
        raise DomainError(f"kernel transform needs a finite non-zero omega, got {omega}")
    kind = exponent.kind
    g = exponent.gamma

    if kind is ExponentClass.EVEN:
        n = exponent.nearest_integer
        assert n is not None
        width = 0.01 / abs(omega) if window is None else window
        first = _even_transform(n, omega, width)
        second = _even_transform(n, omega, 0.5 * width)
        value = second
    else:
        if kind is ExponentClass.ODD:
            n = exponent.nearest_integer
            assert n is not None
            g = float(n)
            sign = 1.0 if ((n + 1) // 2) % 2 == 0 else -1.0
            prefactor = (2.0 / math.pi) * math.factorial(n - 1) * sign
        else:
            prefactor = -(2.0 / math.pi) * float(gamma_fn(g)) * math.sin(g * math.pi / 2.0)
        width = 1.0 / abs(omega) if window is None else window
        first = prefactor * _finite_part(g, omega, width, limit)
        second = prefactor * _finite_part(g, omega, 0.5 * width, limit)
        value = second

    error = abs(first - second)
    scale = abs(value) or 1.0
    if error > rtol * scale:
        logger.warning("核函数变换未收敛: gamma=%s, omega=%s, 误差 %.3e", g, omega, error)
        raise AccuracyError(
            "kernel transform window halving disagrees",
            achieved_tolerance=error / scale,
            evaluations=limit,
        )
    return KernelTransform(value=value, error=error, window=width)


__all__ = ["KernelTransform", "kernel_ft_oracle"]
