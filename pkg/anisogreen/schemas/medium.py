from __future__ import annotations

import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from anisogreen.core.exceptions import CatalogError, ConfigError


class MediumKind(str, Enum):
    """介质类型：正交各向异性 I、横观各向同性 II/III 与各向同性。"""

    MEDIUM_I = "I"
    MEDIUM_II = "II"
    MEDIUM_III = "III"
    ISOTROPIC = "isotropic"


# 各介质需要用户提供的刚度常数
REQUIRED_STIFFNESS: dict[MediumKind, tuple[str, ...]] = {
    MediumKind.MEDIUM_I: ("c11", "c22", "c33", "c44", "c55", "c66"),
    MediumKind.MEDIUM_II: ("c11", "c12", "c33", "c44"),
    MediumKind.MEDIUM_III: ("c11", "c44", "c66"),
    MediumKind.ISOTROPIC: ("c11", "c44"),
}
# 由约束推导、禁止用户直接给出的常数
DERIVED_STIFFNESS: dict[MediumKind, tuple[str, ...]] = {
    MediumKind.MEDIUM_I: (),
    MediumKind.MEDIUM_II: ("c66",),
    MediumKind.MEDIUM_III: (),
    MediumKind.ISOTROPIC: ("c66",),
}
STIFFNESS_KEYS = ("c11", "c12", "c22", "c33", "c44", "c55", "c66")


class MediumSpec(BaseModel):
    """介质描述：密度、刚度常数、各模式损耗比与幂律指数。"""

    __test__ = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: MediumKind = Field(..., description="介质类型。")
    rho: float = Field(..., gt=0.0, description="密度，单位 kg/m³。")
    stiffness: dict[str, float] = Field(
        ..., description="用户提供的刚度常数 c_pp，单位 Pa。"
    )
    beta: tuple[float, float, float] = Field(
        default=(0.0, 0.0, 0.0), description="各模式损耗比 β_i，单位 s^(γ−1)。"
    )
    gamma: float = Field(default=2.0, gt=1.0, description="幂律损耗指数 γ。")

    @model_validator(mode="before")
    @classmethod
    def normalize_isotropic(cls, data: Any) -> Any:
        """c66 == c44 且 β2 == β3 的介质 III 按各向同性介质构造。"""

        if not isinstance(data, dict):
            return data
        try:
            kind = MediumKind(data.get("kind"))
            stiffness = {key: float(value) for key, value in data.get("stiffness", {}).items()}
            beta = [float(item) for item in data.get("beta", (0.0, 0.0, 0.0))]
        except (AttributeError, TypeError, ValueError):
            return data
        if kind is not MediumKind.MEDIUM_III or set(stiffness) != {"c11", "c44", "c66"}:
            return data
        if stiffness["c66"] != stiffness["c44"] or len(beta) != 3 or beta[1] != beta[2]:
            return data
        return {
            **data,
            "kind": MediumKind.ISOTROPIC,
            "stiffness": {"c11": stiffness["c11"], "c44": stiffness["c44"]},
        }

    @field_validator("beta")
    @classmethod
    def validate_beta(cls, value: tuple[float, float, float]) -> tuple[float, float, float]:
        for index, item in enumerate(value, start=1):
            if not math.isfinite(item) or item < 0.0:
                raise ConfigError(
                    f"loss ratio must be finite and >= 0, got {item}",
                    key=f"medium.beta{index}",
                )
        return value

    @model_validator(mode="after")
    def validate_constants(self) -> MediumSpec:
        required = REQUIRED_STIFFNESS[self.kind]
        derived = DERIVED_STIFFNESS[self.kind]
        for key in self.stiffness:
            if key in derived:
                raise ConfigError(
                    f"{key} is derived for medium {self.kind.value} and must not be given",
                    key=f"medium.{key}",
                )
            if key not in required:
                raise CatalogError(
                    f"{key} is not a constant of medium {self.kind.value}",
                    key=f"medium.{key}",
                )
        for key in required:
            if key not in self.stiffness:
                raise CatalogError(
                    f"medium {self.kind.value} requires {key}", key=f"medium.{key}"
                )
        for key, value in self.constants.items():
            if not math.isfinite(value) or value <= 0.0:
                raise ConfigError(
                    f"{key} must be positive, got {value}", key=f"medium.{key}"
                )
        if self.kind is MediumKind.ISOTROPIC and self.beta[1] != self.beta[2]:
            raise ConfigError(
                "isotropic medium has a single shear loss ratio (beta2 == beta3)",
                key="medium.beta3",
            )
        # 加载时在随机方向上检查 Christoffel 张量正定
        from anisogreen.services.christoffel import check_positive_definite

        check_positive_definite(self)
        return self

    @property
    def constants(self) -> dict[str, float]:
        """返回包含推导常数在内的全部刚度常数。"""

        values = {key: float(value) for key, value in self.stiffness.items()}
        if self.kind is MediumKind.MEDIUM_II:
            values["c66"] = 0.5 * (values["c11"] - values["c12"])
        elif self.kind is MediumKind.ISOTROPIC:
            values["c66"] = values["c44"]
        return values

    def c(self, name: str) -> float:
        try:
            return self.constants[name]
        except KeyError as exc:
            raise CatalogError(
                f"{name} is not defined for medium {self.kind.value}"
            ) from exc

    def velocity(self, index: int) -> float:
        """密度归一化速度 c_p = sqrt(c_pp/ρ)。"""

        return math.sqrt(self.c(f"c{index}{index}") / self.rho)

    @property
    def is_isotropic(self) -> bool:
        return self.kind is MediumKind.ISOTROPIC


__all__ = [
    "DERIVED_STIFFNESS",
    "MediumKind",
    "MediumSpec",
    "REQUIRED_STIFFNESS",
    "STIFFNESS_KEYS",
]
