from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from anisogreen.core.exceptions import DomainError

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]


@dataclass(frozen=True, slots=True)
class RickerWavelet:
    """Ricker 子波，峰值频率 f0（Hz），默认延迟 1.5/f0。"""

    peak_frequency: float
    delay: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.peak_frequency) or self.peak_frequency <= 0.0:
            raise DomainError(f"peak frequency must be positive, got {self.peak_frequency}")
        if self.delay is not None and (not math.isfinite(self.delay) or self.delay < 0.0):
            raise DomainError(f"delay must be >= 0, got {self.delay}")

    @property
    def time_delay(self) -> float:
        return 1.5 / self.peak_frequency if self.delay is None else self.delay

    @property
    def width(self) -> float:
        return 1.0 / self.peak_frequency

    def samples(self, t: FloatArray) -> FloatArray:
        arg = (math.pi * self.peak_frequency * (np.asarray(t) - self.time_delay)) ** 2
        return (1.0 - 2.0 * arg) * np.exp(-arg)

    def spectrum(self, omega: FloatArray) -> ComplexArray:
        """Analytic transform ∫ w(t) exp(iωt) dt."""

        omega = np.asarray(omega, dtype=np.float64)
        f0 = self.peak_frequency
        scale = 2.0 * math.pi**2 * f0**2
        amplitude = omega**2 / scale / (math.sqrt(math.pi) * f0)
        return amplitude * np.exp(-(omega**2) / (2.0 * scale)) * np.exp(
            1j * omega * self.time_delay
        )

    def describe(self) -> str:
        return f"ricker(f0={self.peak_frequency:g} Hz, delay={self.time_delay:g} s)"


__all__ = ["RickerWavelet"]
