from __future__ import annotations

from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field


class OracleConfig(BaseModel):
    """独立数值校验器的参数。"""

    __test__ = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    fd_order: Literal[2, 4] = Field(default=4, description="差分模板阶数。")
    spacing: float = Field(default=0.04, gt=0.0, description="最粗网格步长 h，单位 m。")
    refinements: int = Field(
        default=3, ge=3, description="二分加密层数，用于拟合收敛阶。"
    )
    quadrature_tol: float = Field(default=1e-12, gt=0.0, description="参考积分容差。")
    eigen_sweep_cap: int = Field(default=50, ge=1, description="Jacobi 扫描次数上限。")

    def spacings(self) -> list[float]:
        return [self.spacing / 2**level for level in range(self.refinements)]


class ResidualReport(BaseModel):
    """差分残差报告：每个点在各步长下的归一化残差与收敛斜率。"""

    __test__ = False

    model_config = ConfigDict(frozen=True)

    points: list[tuple[float, float, float]] = Field(..., description="检验点坐标。")
    omega: float = Field(..., description="角频率，单位 rad/s。")
    beta: tuple[float, float, float] = Field(..., description="各模式损耗比。")
    fd_order: int = Field(..., description="差分模板阶数。")
    spacings: list[float] = Field(..., description="使用的步长序列。")
    residuals: list[list[float]] = Field(
        ..., description="residuals[p][r] 为第 p 个点在第 r 个步长下的残差。"
    )
    slopes: list[float] = Field(..., description="log2 残差对 log2 h 的拟合斜率。")

    @property
    def floor(self) -> float:
        """最细步长下残差的中位数。"""

        return float(np.median([row[-1] for row in self.residuals]))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for index, point in enumerate(self.points):
            for spacing, residual in zip(self.spacings, self.residuals[index]):
                rows.append(
                    {
                        "point": index,
                        "x1": point[0],
                        "x2": point[1],
                        "x3": point[2],
                        "h": spacing,
                        "residual": residual,
                        "slope": self.slopes[index],
                    }
                )
        return pd.DataFrame(rows)

    def summary(self) -> str:
        slopes = np.asarray(self.slopes)
        return (
            f"{len(self.points)} points, omega={self.omega:g}, order={self.fd_order}: "
            f"slope min {slopes.min():.2f} / median {np.median(slopes):.2f}, "
            f"finest residual median {self.floor:.3e}"
        )


__all__ = ["OracleConfig", "ResidualReport"]
