from __future__ import annotations

import math
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from anisogreen.core.exceptions import ConfigError
from anisogreen.schemas.medium import MediumSpec
from anisogreen.schemas.validation import OracleConfig


class TaskKind(str, Enum):
    """运行任务类型。"""

    EVAL_GRID = "eval-grid"
    SEISMOGRAM = "seismogram"
    VALIDATE = "validate"
    EIGEN_CHECK = "eigen-check"


class OutputFormat(str, Enum):
    CSV = "csv"
    BIN = "bin"


class GridBlock(BaseModel):
    """规则网格：原点、各方向步长与节点数，节点按 x 最快变化的顺序排列。"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    origin: tuple[float, float, float] = Field(..., description="网格原点，单位 m。")
    spacing: tuple[float, float, float] = Field(..., description="各方向步长，单位 m。")
    dims: tuple[int, int, int] = Field(..., description="各方向节点数 n₁×n₂×n₃。")

    @model_validator(mode="after")
    def validate_shape(self) -> GridBlock:
        for axis, value in enumerate(self.spacing, start=1):
            if not math.isfinite(value) or value <= 0.0:
                raise ConfigError(f"spacing along axis {axis} must be positive", key="grid.spacing")
        for axis, value in enumerate(self.dims, start=1):
            if value < 1:
                raise ConfigError(f"dims along axis {axis} must be >= 1", key="grid.dims")
        return self

    @property
    def node_count(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    def axis(self, index: int) -> NDArray[np.float64]:
        return self.origin[index] + self.spacing[index] * np.arange(self.dims[index])

    def nodes(self) -> NDArray[np.float64]:
        """Node coordinates, shape (N, 3), x index fastest."""

        x3, x2, x1 = np.meshgrid(self.axis(2), self.axis(1), self.axis(0), indexing="ij")
        return np.column_stack([x1.ravel(), x2.ravel(), x3.ravel()])

    def source_node(self, tolerance: float = 1e-12) -> tuple[int, int, int] | None:
        """返回与原点重合的节点下标，不存在时返回 None。"""

        index = []
        for axis in range(3):
            position = -self.origin[axis] / self.spacing[axis]
            nearest = round(position)
            if not 0 <= nearest < self.dims[axis]:
                return None
            if abs(self.origin[axis] + nearest * self.spacing[axis]) > tolerance * max(
                1.0, self.spacing[axis]
            ):
                return None
            index.append(int(nearest))
        return (index[0], index[1], index[2])


class FrequencyBlock(BaseModel):
    """单一频率或等间距频带。"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega: float | None = Field(default=None, description="单一角频率，单位 rad/s。")
    omega_min: float | None = Field(default=None, description="频带下限。")
    omega_max: float | None = Field(default=None, description="频带上限。")
    count: int | None = Field(default=None, ge=1, description="频带内频点数。")

    @model_validator(mode="after")
    def validate_choice(self) -> FrequencyBlock:
        band = (self.omega_min, self.omega_max, self.count)
        if self.omega is not None:
            if any(item is not None for item in band):
                raise ConfigError(
                    "give either frequency.omega or a band, not both", key="frequency.omega"
                )
            if not math.isfinite(self.omega) or self.omega < 0.0:
                raise ConfigError("omega must be finite and >= 0", key="frequency.omega")
            return self
        if any(item is None for item in band):
            raise ConfigError(
                "frequency needs omega or omega_min, omega_max and count",
                key="frequency.omega",
            )
        assert self.omega_min is not None and self.omega_max is not None
        if self.omega_min < 0.0 or self.omega_max < self.omega_min:
            raise ConfigError(
                "frequency band needs 0 <= omega_min <= omega_max", key="frequency.omega_max"
            )
        return self

    def values(self) -> list[float]:
        if self.omega is not None:
            return [self.omega]
        assert self.omega_min is not None and self.omega_max is not None
        assert self.count is not None
        return [float(item) for item in np.linspace(self.omega_min, self.omega_max, self.count)]


class OutputBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    directory: str = Field(default="out", description="输出目录，可被 --out 覆盖。")
    formats: tuple[OutputFormat, ...] = Field(
        default=(OutputFormat.BIN,), description="输出格式，csv 与/或 bin。"
    )
    plot_scripts: bool = Field(default=False, description="是否生成绘图脚本。")

    @model_validator(mode="after")
    def validate_formats(self) -> OutputBlock:
        if not self.formats:
            raise ConfigError("at least one output format is required", key="output.formats")
        if self.plot_scripts and OutputFormat.CSV not in self.formats:
            raise ConfigError(
                "plot scripts read the CSV export; add csv to output.formats",
                key="output.plot_scripts",
            )
        return self


class SeismogramBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    receiver: tuple[float, float, float] = Field(..., description="接收点坐标，单位 m。")
    peak_frequency: float = Field(..., gt=0.0, description="Ricker 子波峰值频率，Hz。")
    delay: float | None = Field(default=None, ge=0.0, description="子波延迟，s。")
    dt: float = Field(..., gt=0.0, description="采样间隔，s。")
    duration: float = Field(..., gt=0.0, description="记录长度，s。")


class ValidationBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    fd_order: int = Field(default=4, description="差分模板阶数。")
    spacing: float = Field(default=0.04, gt=0.0, description="最粗步长 h，单位 m。")
    refinements: int = Field(default=3, ge=3, description="二分加密层数。")
    samples: int = Field(default=10, ge=1, description="随机检验点或频点数量。")
    seed: int = Field(default=0, description="随机数种子。")
    radius: float = Field(default=1.5, gt=0.0, description="残差检验点到源点的距离，m。")

    def oracle_config(self) -> OracleConfig:
        if self.fd_order not in (2, 4):
            raise ConfigError("fd_order must be 2 or 4", key="validation.fd_order")
        return OracleConfig(
            fd_order=self.fd_order, spacing=self.spacing, refinements=self.refinements
        )


class RunConfig(BaseModel):
    """一次运行的完整配置。"""

    __test__ = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    task: TaskKind = Field(..., description="任务类型。")
    medium: MediumSpec
    grid: GridBlock | None = None
    frequency: FrequencyBlock | None = None
    output: OutputBlock = Field(default_factory=OutputBlock)
    seismogram: SeismogramBlock | None = None
    validation: ValidationBlock = Field(default_factory=ValidationBlock)
    config_hash: str = Field(default="", description="配置文件内容的 SHA-256。")

    @model_validator(mode="after")
    def validate_task(self) -> RunConfig:
        if self.task is TaskKind.EVAL_GRID:
            if self.grid is None:
                raise ConfigError("eval-grid needs a grid block", key="grid.dims")
            if self.frequency is None:
                raise ConfigError("eval-grid needs a frequency block", key="frequency.omega")
            node = self.grid.source_node()
            if node is not None:
                raise ConfigError(
                    f"grid node {node} coincides with the source at the origin; "
                    "shift grid.origin",
                    key="grid.origin",
                )
        if self.task is TaskKind.SEISMOGRAM and self.seismogram is None:
            raise ConfigError(
                "seismogram task needs a seismogram block", key="seismogram.receiver"
            )
        return self


__all__ = [
    "FrequencyBlock",
    "GridBlock",
    "OutputBlock",
    "OutputFormat",
    "RunConfig",
    "SeismogramBlock",
    "TaskKind",
    "ValidationBlock",
]
