"""Frequency-domain Green tensors and their time-domain synthesis.

Every medium is assembled as Φ₃·I + E₁(Φ₁ − Φ₃) + E₂(Φ₂ − Φ₃), where the
projections E_i act on the scalar solutions through potential Hessians.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.signal import hilbert

from anisogreen.core.exceptions import (
    ConfigError,
    NumericalRegimeError,
    OutOfRegimeError,
)
from anisogreen.core.logging_config import get_logger
from anisogreen.core.worker_pool import WorkerPool
from anisogreen.schemas.medium import MediumKind, MediumSpec
from anisogreen.services.attenuation import loss_symbol
from anisogreen.services.christoffel import mode_constants
from anisogreen.services.potential import hessian_case1, hessian_case2
from anisogreen.services.scalarwave import phi, travel_time
from anisogreen.services.wavelets import RickerWavelet

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]

logger = get_logger("anisogreen.green")

CLOSED_FORMS = ("green_medium1", "green_medium2", "green_medium3", "green_isotropic")
# 子波谱低于峰值该比例的频点不参与合成
SPECTRUM_CUTOFF = 1e-10
NYQUIST_LEAKAGE = 1e-6


@dataclass(frozen=True, slots=True, eq=False)
class GreenTensor:
    x: FloatArray
    omega: float
    G: ComplexArray
    kind: MediumKind


@dataclass(frozen=True, slots=True, eq=False)
class Seismogram:
    """实值 3×3×T 位移记录，第 (k, l) 道为 l 方向单位力产生的 k 分量。"""

    x: FloatArray
    dt: float
    samples: FloatArray
    wavelet: RickerWavelet

    @property
    def times(self) -> FloatArray:
        return np.arange(self.samples.shape[-1]) * self.dt

    def envelope(self, k: int, l: int) -> FloatArray:
        return np.abs(hilbert(self.samples[k, l]))

    def peak_time(self, k: int, l: int) -> float:
        return float(self.times[int(np.argmax(self.envelope(k, l)))])


def _require_kind(medium: MediumSpec, *kinds: MediumKind) -> None:
    if medium.kind not in kinds:
        expected = ", ".join(kind.value for kind in kinds)
        raise ConfigError(
            f"medium kind {medium.kind.value} is not one of {expected}", key="medium.kind"
        )


def _position(x: object) -> FloatArray:
    position = np.asarray(x, dtype=np.float64)
    if position.shape != (3,):
        raise ValueError(f"position must be a 3-vector, got shape {position.shape}")
    return position


def _phis(medium: MediumSpec, x: FloatArray, omega: float) -> tuple[complex, ...]:
    return tuple(phi(medium, mode, x, omega) for mode in (1, 2, 3))


def _plane_hessian(
    medium: MediumSpec, mode: int, beta: float, x: FloatArray, omega: float
) -> ComplexArray:
    b = mode_constants(medium, mode).b
    value = hessian_case2(b[0], b[2], x, omega, beta, medium.gamma, rho=medium.rho)
    return value.H


def _sphere_hessian(
    medium: MediumSpec, mode: int, beta: float, x: FloatArray, omega: float
) -> ComplexArray:
    b = mode_constants(medium, mode).b
    return hessian_case1(b[0], x, omega, beta, medium.gamma, rho=medium.rho).H


def green_medium1(medium: MediumSpec, x: object, omega: float) -> GreenTensor:
    _require_kind(medium, MediumKind.MEDIUM_I)
    position = _position(x)
    G = np.diag(np.array(_phis(medium, position, omega), dtype=np.complex128))
    return GreenTensor(position, omega, G, medium.kind)


def green_medium2(medium: MediumSpec, x: object, omega: float) -> GreenTensor:
    _require_kind(medium, MediumKind.MEDIUM_II)
    position = _position(x)
    phi1, _, phi3 = _phis(medium, position, omega)
    beta = medium.beta
    G = phi3 * np.eye(3, dtype=np.complex128)
    G[2, 2] += phi1 - phi3
    # 模式 3 的速度与 M₂ 算子配对，只出现在差值中
    G[:2, :2] += _plane_hessian(medium, 2, beta[1], position, omega) - _plane_hessian(
        medium, 3, beta[2], position, omega
    )
    return GreenTensor(position, omega, 0.5 * (G + G.T), medium.kind)


def _spherical_assembly(
    medium: MediumSpec, position: FloatArray, omega: float, *, with_plane: bool
) -> ComplexArray:
    beta = medium.beta
    phi3 = phi(medium, 3, position, omega)
    G = phi3 * np.eye(3, dtype=np.complex128)
    G += _sphere_hessian(medium, 1, beta[0], position, omega)
    G -= _sphere_hessian(medium, 3, beta[2], position, omega)
    if with_plane:
        block = _plane_hessian(medium, 2, beta[1], position, omega) - _plane_hessian(
            medium, 3, beta[2], position, omega
        )
        # D₂ = (∂₂, −∂₁, 0) 把平面 Hessian 旋转 90°
        G[0, 0] += block[1, 1]
        G[1, 1] += block[0, 0]
        G[0, 1] -= block[0, 1]
        G[1, 0] -= block[1, 0]
    return 0.5 * (G + G.T)


def green_medium3(medium: MediumSpec, x: object, omega: float) -> GreenTensor:
    _require_kind(medium, MediumKind.MEDIUM_III, MediumKind.ISOTROPIC)
    position = _position(x)
    G = _spherical_assembly(medium, position, omega, with_plane=True)
    return GreenTensor(position, omega, G, medium.kind)


def green_isotropic(medium: MediumSpec, x: object, omega: float) -> GreenTensor:
    _require_kind(medium, MediumKind.ISOTROPIC, MediumKind.MEDIUM_III)
    if not medium.is_isotropic:
        raise ConfigError(
            "medium III is isotropic only with c66 == c44 and beta2 == beta3",
            key="medium.c66",
        )
    position = _position(x)
    G = _spherical_assembly(medium, position, omega, with_plane=False)
    return GreenTensor(position, omega, G, medium.kind)


_DISPATCH = {
    MediumKind.MEDIUM_I: green_medium1,
    MediumKind.MEDIUM_II: green_medium2,
    MediumKind.MEDIUM_III: green_medium3,
    MediumKind.ISOTROPIC: green_isotropic,
}


def green_tensor(medium: MediumSpec, x: object, omega: float) -> GreenTensor:
    return _DISPATCH[medium.kind](medium, x, omega)


def green_grid(
    medium: MediumSpec,
    nodes: FloatArray,
    omega: float,
    pool: WorkerPool | None = None,
) -> ComplexArray:
    """Ĝ at each row of ``nodes``; output shape (N, 3, 3), input order kept."""

    points = [np.asarray(node, dtype=np.float64) for node in np.asarray(nodes)]

    def evaluate(index: int) -> ComplexArray:
        try:
            return green_tensor(medium, points[index], omega).G
        except NumericalRegimeError as exc:
            raise type(exc)(f"node {index}: {exc}") from exc

    indices = range(len(points))
    if pool is None:
        values = [evaluate(index) for index in indices]
    else:
        values = pool.map_ordered(evaluate, indices)
    if not values:
        return np.zeros((0, 3, 3), dtype=np.complex128)
    return np.stack(values)


def _next_power_of_two(value: int) -> int:
    return 1 << max(value - 1, 1).bit_length()


def check_regime(medium: MediumSpec, frequencies: Sequence[float]) -> None:
    """Raise with every frequency at which β_i|Â(ω)| ≥ 1 for some mode."""

    largest = max(medium.beta)
    if largest == 0.0:
        return
    offending = [
        float(omega)
        for omega in frequencies
        if largest * abs(loss_symbol(medium.gamma, float(omega))) >= 1.0
    ]
    if offending:
        logger.warning("%s 个频点超出小损耗范围", len(offending))
        raise OutOfRegimeError(
            f"small-loss regime violated at {len(offending)} frequencies "
            f"(first {offending[0]:g} rad/s)",
            frequencies=offending,
        )


def time_domain(
    medium: MediumSpec,
    x: object,
    wavelet: RickerWavelet,
    dt: float,
    T: float,
) -> Seismogram:
    """Real displacement traces from the inverse transform of W(ω)Ĝ(x, ω)."""

    if dt <= 0.0 or T <= dt:
        raise ConfigError(f"need 0 < dt < T, got dt={dt}, T={T}", key="seismogram.dt")
    position = _position(x)
    count = int(math.ceil(T / dt))
    # 取两倍长度以避免周期回绕
    n = _next_power_of_two(2 * count)
    omega = 2.0 * math.pi * np.fft.rfftfreq(n, d=dt)
    spectrum = wavelet.spectrum(omega)
    peak = float(np.max(np.abs(spectrum)))
    if abs(spectrum[-1]) > NYQUIST_LEAKAGE * peak:
        raise ConfigError(
            f"dt = {dt:g} s does not resolve {wavelet.describe()}", key="seismogram.dt"
        )
    active = np.flatnonzero(np.abs(spectrum) > SPECTRUM_CUTOFF * peak)
    check_regime(medium, omega[active])

    product = np.zeros((3, 3, omega.size), dtype=np.complex128)
    product[:, :, 0] = spectrum[0] * green_tensor(medium, position, 0.0).G
    for index in active:
        if index == 0:
            continue
        product[:, :, index] = spectrum[index] * green_tensor(
            medium, position, float(omega[index])
        ).G
    logger.debug("合成地震图: %s 个频点, N=%s", active.size, n)
    # F[f] 取 e^{+iωt}，逆变换核为 e^{-iωt}
    samples = np.fft.irfft(np.conj(product), n=n, axis=-1) / dt
    return Seismogram(position, dt, samples[:, :, :count], wavelet)


def arrival_times(medium: MediumSpec, x: object) -> tuple[float, float, float]:
    position = _position(x)
    return tuple(  # type: ignore[return-value]
        travel_time(mode_constants(medium, mode).b, position) for mode in (1, 2, 3)
    )


__all__ = [
    "CLOSED_FORMS",
    "GreenTensor",
    "Seismogram",
    "arrival_times",
    "check_regime",
    "green_grid",
    "green_isotropic",
    "green_medium1",
    "green_medium2",
    "green_medium3",
    "green_tensor",
    "time_domain",
]
