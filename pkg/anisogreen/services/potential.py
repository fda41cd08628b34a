"""Potentials Ψ with MΨ = Φ and their second derivatives.

Closed forms cover the two frame shapes the assembled Green tensors need:
a sphere-like frame (b₁ = b₂ = b₃, m = (1, 1, 1)) and an axisymmetric frame
(b₁ = b₂, m = (1, 1, 0)). The general evaluator integrates over confocal
ellipsoids and serves as their cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad, quad_vec
from scipy.special import elliprd, elliprf

from anisogreen.core.exceptions import (
    AccuracyError,
    DegenerateDirectionError,
    DomainError,
    SingularPointError,
    WrongBranchError,
)
from anisogreen.core.logging_config import get_logger
from anisogreen.services.attenuation import PowerLawExponent, loss_factor, wavenumber
from anisogreen.services.christoffel import ModeStructure
from anisogreen.services.scalarwave import TAU_MIN

ComplexArray = NDArray[np.complex128]

logger = get_logger("anisogreen.potential")

SERIES_THRESHOLD = 1e-4
ROOT_TOLERANCE = 1e-12
ROOT_MAX_ITERATIONS = 200
GENERAL_RTOL = 1e-10
EVALUATION_BUDGET = 100_000
# m_j 低于 max(m)·该值时在 τ0 处设置积分断点
SMALL_M_RATIO = 1e-1

# 由闭式给出、需要独立数值校验的量
CLOSED_FORMS = ("closed_integrals", "hessian_case1", "hessian_case2")


@dataclass(frozen=True, slots=True)
class EllipsoidalFrame:
    b: tuple[float, float, float]
    m: tuple[float, float, float]

    def __post_init__(self) -> None:
        if any(not math.isfinite(item) or item <= 0.0 for item in self.b):
            raise DomainError(f"frame velocities must be positive, got {self.b}")
        if any(not math.isfinite(item) or item < 0.0 for item in self.m):
            raise DomainError(f"frame coefficients must be >= 0, got {self.m}")
        if not any(item > 0.0 for item in self.m):
            raise DomainError("at least one frame coefficient m_j must be positive")

    @classmethod
    def from_mode(cls, structure: ModeStructure) -> EllipsoidalFrame:
        return cls(b=structure.b, m=structure.require_m())

    @property
    def b_product(self) -> float:
        return self.b[0] * self.b[1] * self.b[2]

    def travel_time(self, x: NDArray[np.float64]) -> float:
        return math.sqrt(sum((x[j] / self.b[j]) ** 2 for j in range(3)))

    def axis_time(self, x: NDArray[np.float64], threshold: float = 0.0) -> float:
        """sqrt(Σ x_j²/b_j²) over the axes with m_j <= threshold."""

        total = sum((x[j] / self.b[j]) ** 2 for j in range(3) if self.m[j] <= threshold)
        return math.sqrt(total)

    def V(self, s: float) -> NDArray[np.float64]:
        return np.array([self.b[j] ** 2 + self.m[j] ** 2 * s for j in range(3)])

    def F(self, x: NDArray[np.float64], h: float, s: float) -> float:
        return float(np.sum(x**2 / self.V(s))) - h * h

    def F_prime(self, x: NDArray[np.float64], s: float) -> float:
        v = self.V(s)
        return -float(np.sum(np.square(self.m) * x**2 / v**2))

    def F_second(self, x: NDArray[np.float64], s: float) -> float:
        v = self.V(s)
        return 2.0 * float(np.sum(np.power(self.m, 4) * x**2 / v**3))


@dataclass(frozen=True, slots=True)
class HessianValue:
    """∂²Ψ/∂x_k∂x_l restricted to ``axes``."""

    H: ComplexArray
    omega: float
    axes: tuple[int, ...] = (0, 1, 2)
    mode: int | None = None
    on_axis: bool = False
    evaluations: int = field(default=0, compare=False)

    def full(self) -> ComplexArray:
        """按坐标轴嵌入 3×3 矩阵，未计算的分量为 0。"""

        result = np.zeros((3, 3), dtype=np.complex128)
        for a, k in enumerate(self.axes):
            for b, l in enumerate(self.axes):
                result[k, l] = self.H[a, b]
        return result

    def weighted_trace(self, m: tuple[float, float, float]) -> complex:
        return complex(sum(m[k] ** 2 * self.H[a, a] for a, k in enumerate(self.axes)))


def _position(x: object) -> NDArray[np.float64]:
    position = np.asarray(x, dtype=np.float64)
    if position.shape != (3,):
        raise ValueError(f"position must be a 3-vector, got shape {position.shape}")
    return position


def largest_root_S(frame: EllipsoidalFrame, x: object, h: float) -> float:
    """Largest root S of F(s) = Σ x_j²/V_j(s) − h² for 0 < h < τ(x).

    F decreases in s, so the root is bracketed between 0 and an upper
    bound built from the axes with m_j > 0; Newton steps leaving the
    bracket are replaced by bisection.
    """

    position = _position(x)
    if not math.isfinite(h) or h <= 0.0:
        raise DomainError(f"h must be positive, got {h}")
    tau = frame.travel_time(position)
    if h >= tau:
        raise WrongBranchError(f"h = {h:.6g} is not below the travel time {tau:.6g}")
    constant = frame.axis_time(position) ** 2
    if h * h <= constant:
        raise WrongBranchError(
            f"h = {h:.6g} lies inside the degenerate axis time {math.sqrt(constant):.6g}"
        )

    target = ROOT_TOLERANCE * h * h
    value = frame.F(position, h, 0.0)
    if value <= target:
        return 0.0

    lo, hi = 0.0, sum(
        (position[j] / frame.m[j]) ** 2 for j in range(3) if frame.m[j] > 0.0
    ) / (h * h - constant)
    while frame.F(position, h, hi) > 0.0:
        hi *= 2.0
    s = hi
    for _ in range(ROOT_MAX_ITERATIONS):
        value = frame.F(position, h, s)
        if abs(value) <= target:
            return s
        if value > 0.0:
            lo = s
        else:
            hi = s
        if hi - lo <= 4.0 * np.finfo(float).eps * hi:
            return s
        slope = frame.F_prime(position, s)
        candidate = s - value / slope if slope < 0.0 else math.nan
        if not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
        s = candidate
    raise AccuracyError(
        "largest root did not converge",
        achieved_tolerance=abs(frame.F(position, h, s)) / (h * h),
        evaluations=ROOT_MAX_ITERATIONS,
    )


def _series(w: complex, n: int, terms: int | None) -> complex:
    total = 0j
    power = 1.0 + 0j
    k = 0
    while True:
        term = power / (n + k + 1)
        total += term
        k += 1
        if terms is not None and k >= terms:
            return total
        if terms is None and (abs(term) <= 1e-17 * abs(total) or k > 80):
            return total
        power *= w / k


def closed_integrals(K: complex, tau: float) -> tuple[complex, complex, complex]:
    """(∫₀^τ e^{iKh}dh, ∫₀^τ h e^{iKh}dh, ∫₀^τ h² e^{iKh}dh)."""

    if tau < 0.0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    w = 1j * complex(K) * tau
    if abs(w) < SERIES_THRESHOLD:
        j = tuple(_series(w, n, 6) for n in range(3))
    elif abs(w) < 1.0:
        j = tuple(_series(w, n, None) for n in range(3))
    else:
        ew = cmath.exp(w)
        j0 = (ew - 1.0) / w
        j1 = (ew - j0) / w
        j2 = (ew - 2.0 * j1) / w
        j = (j0, j1, j2)
    return (tau * j[0], tau**2 * j[1], tau**3 * j[2])


def hessian_case1(
    b: float,
    x: object,
    omega: float,
    beta: float,
    gamma: PowerLawExponent | float,
    *,
    rho: float = 1.0,
) -> HessianValue:
    """Hessian for b₁ = b₂ = b₃ = b and M = ∇²."""

    position = _position(x)
    r = float(np.linalg.norm(position))
    tau = r / b
    if r == 0.0 or tau < TAU_MIN:
        raise SingularPointError(f"hessian evaluated at the source (r = {r:.3e})")
    factor = loss_factor(omega, beta, gamma)
    k = wavenumber(omega, beta, gamma).value
    unit = position / r
    rr = np.outer(unit, unit)
    _, first, _ = closed_integrals(k, tau)
    far = rr * cmath.exp(1j * k * tau) / (b**3 * tau)
    near = (np.eye(3) - 3.0 * rr) * first / r**3
    H = factor * (far + near) / (4.0 * math.pi * rho)
    return HessianValue(H=0.5 * (H + H.T), omega=omega)


def hessian_case2(
    b_perp: float,
    b_axis: float,
    x: object,
    omega: float,
    beta: float,
    gamma: PowerLawExponent | float,
    *,
    rho: float = 1.0,
) -> HessianValue:
    """In-plane 2×2 Hessian for b₁ = b₂, M = ∂₁² + ∂₂².

    The potential is the one regular on the symmetry axis; on the axis
    itself the block is Φ/2·J.
    """

    position = _position(x)
    radius = math.hypot(position[0], position[1])
    tau0 = abs(position[2]) / b_axis
    tau = math.hypot(radius / b_perp, tau0)
    if tau < TAU_MIN:
        raise SingularPointError(f"hessian evaluated at the source (tau = {tau:.3e})")
    factor = loss_factor(omega, beta, gamma)
    k = wavenumber(omega, beta, gamma).value
    scale = factor / (4.0 * math.pi * rho)
    wave = cmath.exp(1j * k * tau) / (b_perp**2 * b_axis * tau)
    if radius == 0.0:
        H = 0.5 * scale * wave * np.eye(2, dtype=np.complex128)
        return HessianValue(H=H, omega=omega, axes=(0, 1), on_axis=True)
    unit = position[:2] / radius
    rr = np.outer(unit, unit)
    # τ − τ0 的无相消写法
    span = (radius / b_perp) ** 2 / (tau + tau0)
    plane, _, _ = closed_integrals(k, span)
    near = (np.eye(2) - 2.0 * rr) * cmath.exp(1j * k * tau0) * plane / (b_axis * radius**2)
    H = scale * (rr * wave + near)
    return HessianValue(H=0.5 * (H + H.T), omega=omega, axes=(0, 1))


def _general_matrix(
    frame: EllipsoidalFrame,
    x: NDArray[np.float64],
    h: float,
    axes: tuple[int, ...],
) -> NDArray[np.float64]:
    s = largest_root_S(frame, x, h)
    v = frame.V(s)
    m2 = np.square(frame.m)
    f1 = frame.F_prime(x, s)
    f2 = frame.F_second(x, s)
    sqrt_g = math.sqrt(float(np.prod(v)))
    half_log_g = 0.5 * float(np.sum(m2 / v))
    size = len(axes)
    result = np.empty((size, size), dtype=np.float64)
    for a, k in enumerate(axes):
        for c in range(a, size):
            l = axes[c]
            curvature = f2 / f1 + m2[k] / v[k] + m2[l] / v[l] + half_log_g
            entry = 2.0 * x[k] * x[l] / (v[k] * v[l] * f1) * curvature
            if k == l:
                entry += 1.0 / v[k]
            result[a, c] = result[c, a] = entry / (f1 * sqrt_g)
    return result


def hessian_general(
    frame: EllipsoidalFrame,
    x: object,
    omega: float,
    beta: float,
    gamma: PowerLawExponent | float,
    *,
    rho: float = 1.0,
    axes: tuple[int, ...] | None = None,
    epsrel: float = GENERAL_RTOL,
    budget: int = EVALUATION_BUDGET,
) -> HessianValue:
    """Hessian from the confocal-ellipsoid integral over h ∈ (τ₀, τ).

    ``axes`` defaults to the directions with m_j > 0; components along
    m_j = 0 are not fixed by MΨ = Φ.
    """

    position = _position(x)
    if axes is None:
        axes = tuple(j for j in range(3) if frame.m[j] > 0.0)
    tau = frame.travel_time(position)
    if tau < TAU_MIN:
        raise SingularPointError(f"hessian evaluated at the source (tau = {tau:.3e})")
    slope0 = frame.F_prime(position, 0.0)
    if slope0 == 0.0:
        raise DegenerateDirectionError(
            "position lies on the axis of a degenerate frame; use the axis limit"
        )
    factor = loss_factor(omega, beta, gamma)
    k = wavenumber(omega, beta, gamma).value
    b = frame.b_product

    boundary = np.empty((len(axes), len(axes)), dtype=np.complex128)
    wave = cmath.exp(1j * k * tau)
    for a, p in enumerate(axes):
        for c, q in enumerate(axes):
            boundary[a, c] = -position[p] * position[q] * wave / (
                b * frame.b[p] ** 2 * frame.b[q] ** 2 * slope0 * tau
            )

    lower = frame.axis_time(position)
    size = len(axes)
    upper_index = np.triu_indices(size)

    def integrand(h: float) -> NDArray[np.float64]:
        matrix = _general_matrix(frame, position, h, axes)[upper_index]
        phase = cmath.exp(1j * k * h)
        return np.concatenate([phase.real * matrix, phase.imag * matrix])

    points = None
    small = max(frame.m) * SMALL_M_RATIO
    breakpoint = frame.axis_time(position, threshold=small)
    if lower < breakpoint < tau:
        points = (breakpoint,)
    result, error, info = quad_vec(
        integrand,
        lower,
        tau,
        epsrel=epsrel,
        quadrature="gk15",
        limit=max(budget // 15, 1),
        points=points,
        full_output=True,
    )
    scale = float(np.linalg.norm(result)) or 1.0
    if info.status != 0:
        logger.warning("椭球积分未收敛: status=%s, 估计误差 %.3e", info.status, error)
        raise AccuracyError(
            "ellipsoidal Hessian quadrature did not converge",
            achieved_tolerance=float(error) / scale,
            evaluations=int(info.neval),
        )
    half = len(result) // 2
    packed = result[:half] + 1j * result[half:]
    integral = np.zeros((size, size), dtype=np.complex128)
    integral[upper_index] = packed
    integral = integral + np.triu(integral, 1).T

    H = factor * (boundary - integral) / (4.0 * math.pi * rho)
    logger.debug("椭球积分完成: %s 次求值", info.neval)
    return HessianValue(
        H=0.5 * (H + H.T), omega=omega, axes=axes, evaluations=int(info.neval)
    )


def _tail_integrals(
    frame: EllipsoidalFrame, x: NDArray[np.float64], u: float
) -> tuple[float, float]:
    """(∫_u^∞ ds/√G, ∫_u^∞ Σx_j²/V_j ds/√G) via Carlson integrals."""

    m = frame.m
    shift = [frame.b[j] ** 2 / m[j] ** 2 + u for j in range(3)]
    product = m[0] * m[1] * m[2]
    plain = 2.0 * float(elliprf(*shift)) / product
    weighted = 0.0
    for j in range(3):
        others = [shift[i] for i in range(3) if i != j]
        weighted += (x[j] / m[j]) ** 2 * float(elliprd(others[0], others[1], shift[j]))
    return plain, 2.0 * weighted / (3.0 * product)


def static_potential(frame: EllipsoidalFrame, x: object, rho: float = 1.0) -> float:
    """Static (ω = 0, β = 0) potential Ψ up to an additive constant."""

    position = _position(x)
    if min(frame.m) <= 0.0:
        raise DomainError("static potential needs all m_j > 0")
    tau = frame.travel_time(position)
    if tau < TAU_MIN:
        raise SingularPointError(f"potential evaluated at the source (tau = {tau:.3e})")
    plain0, weighted0 = _tail_integrals(frame, position, 0.0)

    def inner(h: float) -> float:
        s = largest_root_S(frame, position, h)
        plain, weighted = _tail_integrals(frame, position, s)
        return weighted / (h * h) + plain0 - plain

    body, _ = quad(inner, 0.0, tau, epsabs=0.0, epsrel=1e-13, limit=200)
    # h ≥ τ 时 S = 0，外层积分可直接写出
    return (body + weighted0 / tau) / (16.0 * math.pi * rho)


__all__ = [
    "CLOSED_FORMS",
    "EllipsoidalFrame",
    "HessianValue",
    "closed_integrals",
    "hessian_case1",
    "hessian_case2",
    "hessian_general",
    "largest_root_S",
    "static_potential",
]
