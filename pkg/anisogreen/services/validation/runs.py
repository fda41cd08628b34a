"""Oracle runs behind the ``validate`` subcommand.

Each run returns a table for the CSV export and a one-line summary; a run
whose agreement misses its acceptance bound carries an ``AccuracyError``
that the caller raises once the table is written.
"""

from __future__ import annotations

import cmath
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd

from anisogreen.core.exceptions import AccuracyError, ConfigError
from anisogreen.core.logging_config import get_logger
from anisogreen.schemas.run_config import RunConfig
from anisogreen.services.attenuation import loss_symbol
from anisogreen.services.potential import closed_integrals
from anisogreen.services.validation.eigensolver import compare_eigenstructure
from anisogreen.services.validation.kernel_ft import kernel_ft_oracle
from anisogreen.services.validation.quadrature import reference_quadrature
from anisogreen.services.validation.residual import fd_residual, green_sampler

logger = get_logger("anisogreen.validation.runs")

EIGEN_TOLERANCE = 1e-10
COMPLETENESS_TOLERANCE = 1e-12
QUADRATURE_TOLERANCE = 1e-10
KERNEL_TOLERANCE = 1e-6
SLOPE_BAND = 0.3
# 有损介质的残差上限 max(C·(h/r)⁴, C′·(β·|Â|)²)
RESIDUAL_STENCIL_CONSTANT = 1e3
RESIDUAL_LOSS_CONSTANT = 10.0


class ValidationKind(str, Enum):
    RESIDUAL = "residual"
    EIGEN = "eigen"
    QUADRATURE = "quadrature"
    KERNEL_FT = "kernel-ft"


@dataclass(frozen=True, slots=True)
class ValidationOutcome:
    kind: ValidationKind
    table: pd.DataFrame
    summary: str
    failure: AccuracyError | None = None


def _unit_vectors(count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    vectors = rng.normal(size=(count, 3))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def _first_frequency(config: RunConfig) -> float:
    if config.frequency is None:
        raise ConfigError("residual validation needs a frequency block", key="frequency.omega")
    omega = config.frequency.values()[0]
    if omega <= 0.0:
        raise ConfigError("residual validation needs omega > 0", key="frequency.omega")
    return omega


def residual_envelope(config: RunConfig, omega: float) -> float:
    """Acceptance bound on the finest residual of a lossy medium."""

    block = config.validation
    finest = block.oracle_config().spacings()[-1]
    loss = max(config.medium.beta) * abs(loss_symbol(config.medium.gamma, omega))
    return max(
        RESIDUAL_STENCIL_CONSTANT * (finest / block.radius) ** 4,
        RESIDUAL_LOSS_CONSTANT * loss**2,
    )


def run_residual(config: RunConfig) -> ValidationOutcome:
    block = config.validation
    omega = _first_frequency(config)
    points = block.radius * _unit_vectors(block.samples, block.seed)
    report = fd_residual(
        config.medium, green_sampler(config.medium, omega), points, omega, block.oracle_config()
    )
    evaluations = len(report.points) * len(report.spacings)
    failure = None
    if not any(config.medium.beta):
        worst = min(report.slopes)
        if worst < report.fd_order - SLOPE_BAND:
            failure = AccuracyError(
                f"residual slope {worst:.2f} below order {report.fd_order}",
                achieved_tolerance=report.floor,
                evaluations=evaluations,
            )
    else:
        envelope = residual_envelope(config, omega)
        if report.floor > envelope:
            failure = AccuracyError(
                f"residual floor {report.floor:.3e} above the loss envelope {envelope:.3e}",
                achieved_tolerance=report.floor,
                evaluations=evaluations,
            )
    return ValidationOutcome(ValidationKind.RESIDUAL, report.to_frame(), report.summary(), failure)


def run_eigen(config: RunConfig) -> ValidationOutcome:
    block = config.validation
    rows = []
    for n in _unit_vectors(block.samples, block.seed):
        comparison = compare_eigenstructure(
            config.medium, n, max_sweeps=block.oracle_config().eigen_sweep_cap
        )
        rows.append(
            {
                "n1": n[0],
                "n2": n[1],
                "n3": n[2],
                "eigenvalue_error": comparison.eigenvalue_error,
                "vector_error": comparison.vector_error,
                "completeness_error": comparison.completeness_error,
            }
        )
    table = pd.DataFrame(rows)
    worst_value = float(table["eigenvalue_error"].max())
    worst_vector = float(table["vector_error"].max())
    worst_complete = float(table["completeness_error"].max())
    summary = (
        f"{len(table)} directions: eigenvalue {worst_value:.2e}, "
        f"polarization {worst_vector:.2e}, completeness {worst_complete:.2e}"
    )
    failure = None
    if max(worst_value, worst_vector) > EIGEN_TOLERANCE or worst_complete > COMPLETENESS_TOLERANCE:
        failure = AccuracyError(
            "closed-form eigenstructure disagrees with the Jacobi sweep",
            achieved_tolerance=max(worst_value, worst_vector, worst_complete),
            evaluations=len(table),
        )
    return ValidationOutcome(ValidationKind.EIGEN, table, summary, failure)


def _power_integrand(K: complex, power: int) -> Callable[[float], complex]:
    return lambda h: h**power * cmath.exp(1j * K * h)


def run_quadrature(config: RunConfig) -> ValidationOutcome:
    block = config.validation
    tolerance = block.oracle_config().quadrature_tol
    rng = np.random.default_rng(block.seed)
    rows = []
    for _ in range(block.samples):
        K = complex(rng.uniform(0.0, 20.0), rng.uniform(0.0, 2.0))
        # 对数均匀分布的 τ 覆盖级数与分部积分两种区间
        tau = float(10.0 ** rng.uniform(-6.0, 0.5))
        closed = closed_integrals(K, tau)
        for power, value in enumerate(closed):
            reference = reference_quadrature(_power_integrand(K, power), 0.0, tau, tolerance)
            rows.append(
                {
                    "K_re": K.real,
                    "K_im": K.imag,
                    "tau": tau,
                    "power": power,
                    "closed_re": value.real,
                    "closed_im": value.imag,
                    "error": abs(value - reference),
                }
            )
    table = pd.DataFrame(rows)
    worst = float(table["error"].max())
    summary = f"{block.samples} (K, tau) samples: max abs error {worst:.2e}"
    failure = None
    if worst > QUADRATURE_TOLERANCE:
        failure = AccuracyError(
            "closed integrals disagree with the reference quadrature",
            achieved_tolerance=worst,
            evaluations=len(table),
        )
    return ValidationOutcome(ValidationKind.QUADRATURE, table, summary, failure)


def run_kernel_ft(config: RunConfig) -> ValidationOutcome:
    block = config.validation
    if config.frequency is not None:
        frequencies = [omega for omega in config.frequency.values() if omega > 0.0]
    else:
        frequencies = [float(item) for item in np.logspace(0.0, 2.0, block.samples)]
    gamma = config.medium.gamma
    rows = []
    for omega in frequencies:
        oracle = kernel_ft_oracle(gamma, omega)
        symbol = loss_symbol(gamma, omega)
        rows.append(
            {
                "omega": omega,
                "symbol_re": symbol.real,
                "symbol_im": symbol.imag,
                "oracle_re": oracle.value.real,
                "oracle_im": oracle.value.imag,
                "relative_error": abs(symbol - oracle.value) / abs(oracle.value),
            }
        )
    table = pd.DataFrame(rows)
    worst = float(table["relative_error"].max())
    summary = f"gamma={gamma:g}, {len(table)} frequencies: max relative error {worst:.2e}"
    failure = None
    if worst > KERNEL_TOLERANCE:
        failure = AccuracyError(
            "loss symbol disagrees with the kernel transform",
            achieved_tolerance=worst,
            evaluations=len(table),
        )
    return ValidationOutcome(ValidationKind.KERNEL_FT, table, summary, failure)


_RUNNERS: dict[ValidationKind, Callable[[RunConfig], ValidationOutcome]] = {
    ValidationKind.RESIDUAL: run_residual,
    ValidationKind.EIGEN: run_eigen,
    ValidationKind.QUADRATURE: run_quadrature,
    ValidationKind.KERNEL_FT: run_kernel_ft,
}


def run_validation(kind: ValidationKind | str, config: RunConfig) -> ValidationOutcome:
    kind = ValidationKind(kind)
    outcome = _RUNNERS[kind](config)
    if outcome.failure is not None:
        logger.warning("校验 %s 未通过: %s", kind.value, outcome.failure)
    else:
        logger.info("校验 %s 通过: %s", kind.value, outcome.summary)
    return outcome


__all__ = [
    "ValidationKind",
    "ValidationOutcome",
    "residual_envelope",
    "run_eigen",
    "run_kernel_ft",
    "run_quadrature",
    "run_residual",
    "run_validation",
]
