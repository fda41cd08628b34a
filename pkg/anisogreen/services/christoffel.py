from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from anisogreen.core.exceptions import (
    CatalogError,
    ConfigError,
    DegenerateDirectionError,
    UnsupportedModeError,
)
from anisogreen.schemas.medium import REQUIRED_STIFFNESS, MediumKind, MediumSpec

FloatArray = NDArray[np.float64]

# Voigt 下标映射 p(i,j)，采用 0 起始编号
VOIGT_INDEX = ((0, 5, 4), (5, 1, 3), (4, 3, 2))
# 零极化向量判定阈值（相对 |n|^k）
DEGENERACY_TOLERANCE = 1e-14
PD_SAMPLE_COUNT = 64


@dataclass(frozen=True, slots=True)
class _ModeRow:
    velocities: tuple[int, int, int]
    m: tuple[float, float, float] | None
    polarization_rule: str


# 各介质的 (b; m) 表，b 以 c_pp 的下标 p 记录，m 为 None 表示该项不可用
MODE_TABLE: dict[MediumKind, tuple[_ModeRow, _ModeRow, _ModeRow]] = {
    MediumKind.MEDIUM_I: (
        _ModeRow((1, 6, 5), (1.0, 0.0, 0.0), "constant-axis"),
        _ModeRow((6, 2, 4), (0.0, 1.0, 0.0), "constant-axis"),
        _ModeRow((5, 4, 3), (0.0, 0.0, 1.0), "constant-axis"),
    ),
    MediumKind.MEDIUM_II: (
        _ModeRow((4, 4, 3), (0.0, 0.0, 1.0), "constant-axis"),
        _ModeRow((1, 1, 4), (1.0, 1.0, 0.0), "in-plane-gradient"),
        _ModeRow((6, 6, 4), None, "in-plane-curl"),
    ),
    MediumKind.MEDIUM_III: (
        _ModeRow((1, 1, 1), (1.0, 1.0, 1.0), "gradient"),
        _ModeRow((6, 6, 4), (1.0, 1.0, 0.0), "in-plane-curl"),
        _ModeRow((4, 4, 4), None, "double-curl"),
    ),
}
MODE_TABLE[MediumKind.ISOTROPIC] = MODE_TABLE[MediumKind.MEDIUM_III]


@dataclass(frozen=True, slots=True)
class ModeStructure:
    mode: int
    b: tuple[float, float, float]
    m: tuple[float, float, float] | None
    polarization_rule: str

    @property
    def usable(self) -> bool:
        return self.m is not None

    @property
    def b_product(self) -> float:
        return self.b[0] * self.b[1] * self.b[2]

    def require_m(self) -> tuple[float, float, float]:
        if self.m is None:
            raise UnsupportedModeError(
                f"mode {self.mode} has no potential coefficients; it enters G only "
                "through the identity term"
            )
        return self.m


@dataclass(frozen=True, slots=True)
class ChristoffelValue:
    direction: FloatArray
    gamma_c: FloatArray
    eigenvalues: tuple[float, float, float]
    eigenvectors: tuple[FloatArray, FloatArray, FloatArray]
    normalizers: tuple[float, float, float]
    degenerate: tuple[bool, bool, bool]

    def projector(self, index: int) -> FloatArray:
        """E_i = D_i D_iᵀ / M_i；退化方向上不可用。"""

        if self.degenerate[index]:
            raise DegenerateDirectionError(
                f"polarization {index + 1} vanishes along direction {self.direction.tolist()}"
            )
        vector = self.eigenvectors[index]
        return np.outer(vector, vector) / self.normalizers[index]


def _direction(n: object) -> FloatArray:
    vector = np.asarray(n, dtype=np.float64)
    if vector.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {vector.shape}")
    return vector


def stiffness_voigt(medium: MediumSpec) -> FloatArray:
    """Return the 6×6 Voigt table of the medium's elasticity tensor."""

    c = medium.constants
    table = np.zeros((6, 6), dtype=np.float64)
    if medium.kind is MediumKind.MEDIUM_I:
        upper = [
            [c["c11"], -c["c66"], -c["c55"]],
            [-c["c66"], c["c22"], -c["c44"]],
            [-c["c55"], -c["c44"], c["c33"]],
        ]
        lower = [c["c44"], c["c55"], c["c66"]]
    elif medium.kind is MediumKind.MEDIUM_II:
        upper = [
            [c["c11"], c["c12"], -c["c44"]],
            [c["c12"], c["c11"], -c["c44"]],
            [-c["c44"], -c["c44"], c["c33"]],
        ]
        lower = [c["c44"], c["c44"], c["c66"]]
    else:
        off66 = c["c11"] - 2.0 * c["c66"]
        off44 = c["c11"] - 2.0 * c["c44"]
        upper = [
            [c["c11"], off66, off44],
            [off66, c["c11"], off44],
            [off44, off44, c["c11"]],
        ]
        lower = [c["c44"], c["c44"], c["c66"]]
    table[:3, :3] = upper
    table[3:, 3:] = np.diag(lower)
    return table


def voigt_contract(table: FloatArray, n: object) -> FloatArray:
    """Γ_ij = Σ_kl C_kilj n_k n_l for a Voigt table C."""

    vector = _direction(n)
    result = np.zeros((3, 3), dtype=np.float64)
    for i in range(3):
        for j in range(3):
            total = 0.0
            for k in range(3):
                for l in range(3):
                    total += table[VOIGT_INDEX[k][i], VOIGT_INDEX[l][j]] * vector[k] * vector[l]
            result[i, j] = total
    return 0.5 * (result + result.T)


def christoffel_tensor(medium: MediumSpec, n: object) -> FloatArray:
    """Γᶜ(n) with ∂_j replaced by n_j."""

    n1, n2, n3 = _direction(n)
    c = medium.constants
    g = np.zeros((3, 3), dtype=np.float64)
    if medium.kind is MediumKind.MEDIUM_I:
        g[0, 0] = c["c11"] * n1**2 + c["c66"] * n2**2 + c["c55"] * n3**2
        g[1, 1] = c["c66"] * n1**2 + c["c22"] * n2**2 + c["c44"] * n3**2
        g[2, 2] = c["c55"] * n1**2 + c["c44"] * n2**2 + c["c33"] * n3**2
        return g
    if medium.kind is MediumKind.MEDIUM_II:
        g[0, 0] = c["c11"] * n1**2 + c["c66"] * n2**2 + c["c44"] * n3**2
        g[1, 1] = c["c66"] * n1**2 + c["c11"] * n2**2 + c["c44"] * n3**2
        g[2, 2] = c["c44"] * (n1**2 + n2**2) + c["c33"] * n3**2
        g[0, 1] = g[1, 0] = (c["c11"] - c["c66"]) * n1 * n2
        return g
    if medium.kind in (MediumKind.MEDIUM_III, MediumKind.ISOTROPIC):
        g[0, 0] = c["c11"] * n1**2 + c["c66"] * n2**2 + c["c44"] * n3**2
        g[1, 1] = c["c66"] * n1**2 + c["c11"] * n2**2 + c["c44"] * n3**2
        g[2, 2] = c["c44"] * (n1**2 + n2**2) + c["c11"] * n3**2
        g[0, 1] = g[1, 0] = (c["c11"] - c["c66"]) * n1 * n2
        g[0, 2] = g[2, 0] = (c["c11"] - c["c44"]) * n1 * n3
        g[1, 2] = g[2, 1] = (c["c11"] - c["c44"]) * n2 * n3
        return g
    raise CatalogError(f"unknown medium kind {medium.kind!r}")


def mode_constants(medium: MediumSpec, mode: int) -> ModeStructure:
    """Return the (b; m) row of the mode table for the medium."""

    if mode not in (1, 2, 3):
        raise ConfigError(f"mode must be 1, 2 or 3, got {mode}")
    try:
        row = MODE_TABLE[medium.kind][mode - 1]
    except KeyError as exc:
        raise CatalogError(f"unknown medium kind {medium.kind!r}") from exc
    b = tuple(medium.velocity(index) for index in row.velocities)
    return ModeStructure(
        mode=mode,
        b=(b[0], b[1], b[2]),
        m=row.m,
        polarization_rule=row.polarization_rule,
    )


def _eigenvalues(medium: MediumSpec, n: FloatArray) -> tuple[float, float, float]:
    n1, n2, n3 = n
    c = medium.constants
    planar = n1**2 + n2**2
    if medium.kind is MediumKind.MEDIUM_I:
        return (
            c["c11"] * n1**2 + c["c66"] * n2**2 + c["c55"] * n3**2,
            c["c66"] * n1**2 + c["c22"] * n2**2 + c["c44"] * n3**2,
            c["c55"] * n1**2 + c["c44"] * n2**2 + c["c33"] * n3**2,
        )
    if medium.kind is MediumKind.MEDIUM_II:
        return (
            c["c44"] * planar + c["c33"] * n3**2,
            c["c11"] * planar + c["c44"] * n3**2,
            c["c66"] * planar + c["c44"] * n3**2,
        )
    norm2 = planar + n3**2
    return (
        c["c11"] * norm2,
        c["c66"] * planar + c["c44"] * n3**2,
        c["c44"] * norm2,
    )


def _polarizations(
    kind: MediumKind, n: FloatArray
) -> tuple[tuple[FloatArray, FloatArray, FloatArray], tuple[float, float, float]]:
    n1, n2, n3 = n
    planar = n1**2 + n2**2
    if kind is MediumKind.MEDIUM_I:
        basis = np.eye(3)
        return (basis[0], basis[1], basis[2]), (1.0, 1.0, 1.0)
    if kind is MediumKind.MEDIUM_II:
        return (
            np.array([0.0, 0.0, 1.0]),
            np.array([n1, n2, 0.0]),
            np.array([n2, -n1, 0.0]),
        ), (1.0, planar, planar)
    norm2 = planar + n3**2
    return (
        np.array([n1, n2, n3]),
        np.array([n2, -n1, 0.0]),
        np.array([-n1 * n3, -n2 * n3, planar]),
    ), (norm2, planar, planar * norm2)


def eigenstructure(medium: MediumSpec, n: object) -> ChristoffelValue:
    """Closed-form eigenvalues L_i and unnormalized eigenvectors D_i of Γᶜ(n)."""

    vector = _direction(n)
    length = float(np.linalg.norm(vector))
    if length == 0.0:
        raise DegenerateDirectionError("direction n must be non-zero")
    vectors, normalizers = _polarizations(medium.kind, vector)
    # D_i 在 n 上的次数分别决定零向量判定的尺度
    scale = max(length, 1.0)
    degenerate = tuple(
        bool(normalizer <= (DEGENERACY_TOLERANCE * scale) ** 2)
        for normalizer in normalizers
    )
    return ChristoffelValue(
        direction=vector,
        gamma_c=christoffel_tensor(medium, vector),
        eigenvalues=_eigenvalues(medium, vector),
        eigenvectors=vectors,
        normalizers=normalizers,
        degenerate=(degenerate[0], degenerate[1], degenerate[2]),
    )


def _loss_weighted_sum(
    value: ChristoffelValue, weights: tuple[float, float, float]
) -> FloatArray:
    """Σ w_i L_i E_i，退化模式共享剩余子空间。"""

    total = np.zeros((3, 3), dtype=np.float64)
    remainder = np.eye(3)
    degenerate_modes = []
    for index in range(3):
        if value.degenerate[index]:
            degenerate_modes.append(index)
            continue
        projector = value.projector(index)
        total += weights[index] * value.eigenvalues[index] * projector
        remainder -= projector
    if degenerate_modes:
        share = sum(
            weights[index] * value.eigenvalues[index] for index in degenerate_modes
        ) / len(degenerate_modes)
        total += share * remainder
    return 0.5 * (total + total.T)


def viscosity_tensor(medium: MediumSpec, n: object) -> FloatArray:
    """Γᵛ(n) = Σ β_i L_i(n) E_i(n) under the proportional-loss assumption."""

    return _loss_weighted_sum(eigenstructure(medium, n), medium.beta)


def check_positive_definite(
    medium: MediumSpec, samples: int = PD_SAMPLE_COUNT, seed: int = 0
) -> None:
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(samples, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    for direction in directions:
        smallest = float(np.linalg.eigvalsh(christoffel_tensor(medium, direction))[0])
        if smallest <= 0.0:
            raise ConfigError(
                "Christoffel tensor is not positive definite along "
                f"{np.round(direction, 6).tolist()}",
                key="medium",
            )


def from_viscosity_table(
    kind: MediumKind | str,
    rho: float,
    stiffness: dict[str, float],
    viscosity: FloatArray,
    gamma: float = 2.0,
    *,
    samples: int = 16,
    rel_tol: float = 1e-9,
    seed: int = 0,
) -> MediumSpec:
    """Build a medium from a full 6×6 viscosity table.

    The table must be proportional to the stiffness mode by mode; the
    per-mode ratios become the loss ratios β_i.
    """

    elastic = MediumSpec(kind=MediumKind(kind), rho=rho, stiffness=stiffness, gamma=gamma)
    table = np.asarray(viscosity, dtype=np.float64)
    if table.shape != (6, 6) or not np.allclose(table, table.T, rtol=0.0, atol=0.0):
        raise CatalogError("viscosity table must be a symmetric 6×6 array")
    rng = np.random.default_rng(seed)
    ratios: list[list[float]] = [[], [], []]
    for direction in rng.normal(size=(samples, 3)):
        direction /= np.linalg.norm(direction)
        value = eigenstructure(elastic, direction)
        gamma_v = voigt_contract(table, direction)
        for index in range(3):
            vector = value.eigenvectors[index]
            viscous = float(vector @ gamma_v @ vector) / value.normalizers[index]
            residual = gamma_v @ vector - viscous * vector
            if np.linalg.norm(residual) > rel_tol * max(
                np.linalg.norm(gamma_v) * np.linalg.norm(vector), 1e-300
            ):
                raise CatalogError(
                    f"viscosity table does not share eigenvector D_{index + 1} with stiffness"
                )
            ratios[index].append(viscous / value.eigenvalues[index])
    betas = []
    for index, values in enumerate(ratios):
        reference = values[0]
        if any(abs(item - reference) > rel_tol * abs(reference) for item in values):
            raise CatalogError(
                f"viscous eigenvalue of mode {index + 1} is not proportional to the elastic one"
            )
        betas.append(max(reference, 0.0))
    return elastic.model_copy(update={"beta": (betas[0], betas[1], betas[2])})


def best_assignment(
    analytic: tuple[float, float, float], numeric: FloatArray
) -> tuple[int, int, int]:
    """按特征值最接近原则将解析模式匹配到数值特征对。"""

    best: tuple[int, int, int] = (0, 1, 2)
    best_error = np.inf
    for order in permutations(range(3)):
        error = sum(abs(analytic[i] - numeric[order[i]]) for i in range(3))
        if error < best_error:
            best_error = error
            best = (order[0], order[1], order[2])
    return best


def media_catalog_table() -> pd.DataFrame:
    """Media catalog as a table, one row per (medium, mode)."""

    rows = []
    for kind, modes in MODE_TABLE.items():
        for mode, row in enumerate(modes, start=1):
            rows.append(
                {
                    "medium": kind.value,
                    "mode": mode,
                    "b": ", ".join(f"c{index}" for index in row.velocities),
                    "m": "*" if row.m is None else ", ".join(f"{item:g}" for item in row.m),
                    "polarization": row.polarization_rule,
                    "constants": ", ".join(REQUIRED_STIFFNESS[kind]),
                }
            )
    return pd.DataFrame(rows)


__all__ = [
    "ChristoffelValue",
    "MODE_TABLE",
    "ModeStructure",
    "best_assignment",
    "check_positive_definite",
    "christoffel_tensor",
    "eigenstructure",
    "from_viscosity_table",
    "media_catalog_table",
    "mode_constants",
    "stiffness_voigt",
    "viscosity_tensor",
    "voigt_contract",
]
