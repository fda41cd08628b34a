from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from anisogreen.core.exceptions import FieldFormatError

# 张量场按 G11, G12, G13, G21, ... 的行优先顺序存储
TENSOR_COMPONENTS = 9
SCALAR_COMPONENTS = 1


class Provenance(BaseModel):
    """场数据来源：配置哈希、工具版本与求值参数。"""

    model_config = ConfigDict(frozen=True)

    config_hash: str = Field(..., description="配置文件内容的 SHA-256。")
    tool_version: str = Field(..., description="生成数据的 anisogreen 版本。")
    omega: float = Field(..., description="角频率，单位 rad/s。")
    medium_kind: str = Field(..., description="介质类型。")


class FieldVolume(BaseModel):
    """规则网格上的复数标量或 3×3 张量场。"""

    __test__ = False

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    origin: tuple[float, float, float]
    spacing: tuple[float, float, float]
    dims: tuple[int, int, int]
    components: int = Field(default=TENSOR_COMPONENTS, description="每个节点的分量数。")
    data: np.ndarray = Field(..., description="复数数组，形状 (节点数, 分量数)。")
    provenance: Provenance

    @model_validator(mode="after")
    def validate_layout(self) -> FieldVolume:
        if self.components not in (TENSOR_COMPONENTS, SCALAR_COMPONENTS):
            raise FieldFormatError(f"unsupported component count {self.components}")
        expected = (self.dims[0] * self.dims[1] * self.dims[2], self.components)
        if self.data.shape != expected:
            raise FieldFormatError(
                f"data shape {self.data.shape} does not match dims x components {expected}"
            )
        return self

    @property
    def node_count(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    def component(self, k: int, l: int) -> NDArray[np.complex128]:
        """第 (k, l) 分量，形状 (n₃, n₂, n₁)。"""

        index = 3 * k + l if self.components == TENSOR_COMPONENTS else 0
        return self.data[:, index].reshape(self.dims[2], self.dims[1], self.dims[0])


class ManifestEntry(BaseModel):
    name: str
    sha256: str
    bytes: int


class RunManifest(BaseModel):
    """每次写文件的运行都会生成的清单。"""

    tool: str = "anisogreen"
    version: str
    config_hash: str
    command: str
    files: list[ManifestEntry] = Field(default_factory=list)


__all__ = [
    "FieldVolume",
    "ManifestEntry",
    "Provenance",
    "RunManifest",
    "SCALAR_COMPONENTS",
    "TENSOR_COMPONENTS",
]
