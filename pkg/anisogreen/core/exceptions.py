from __future__ import annotations

from collections.abc import Sequence

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_REGIME_ERROR = 3
EXIT_ACCURACY_ERROR = 4


class AnisoGreenError(Exception):
    """所有可预期错误的基础异常，携带命令行退出码。"""

    __test__ = False
    exit_code = 1


class ConfigError(AnisoGreenError):
    """运行配置或介质参数不合法。"""

    __test__ = False
    exit_code = EXIT_CONFIG_ERROR

    def __init__(
        self, message: str, *, key: str | None = None, line: int | None = None
    ) -> None:
        location = []
        if key is not None:
            location.append(key)
        if line is not None:
            location.append(f"line {line}")
        text = f"{message} ({', '.join(location)})" if location else message
        super().__init__(text)
        self.detail = message
        self.key = key
        self.line = line


class CatalogError(ConfigError):
    """介质目录中不存在或参数不完整。"""

    __test__ = False


class FieldFormatError(AnisoGreenError):
    """场数据文件头与数据长度不一致或魔数错误。"""

    __test__ = False


class NumericalRegimeError(AnisoGreenError):
    """输入落在闭式解适用范围之外。"""

    __test__ = False
    exit_code = EXIT_REGIME_ERROR


class DomainError(NumericalRegimeError):
    """参数超出定义域，例如 γ ≤ 1 或 h ≤ 0。"""

    __test__ = False


class OutOfRegimeError(NumericalRegimeError):
    """小损耗假设 β|Â(ω)| < 1 不成立。"""

    __test__ = False

    def __init__(self, message: str, *, frequencies: Sequence[float] = ()) -> None:
        super().__init__(message)
        self.frequencies = tuple(float(value) for value in frequencies)


class SingularPointError(NumericalRegimeError):
    """在源点或走时小于 τ_min 的位置求值。"""

    __test__ = False


class DegenerateDirectionError(NumericalRegimeError):
    """方向向量为零。"""

    __test__ = False


class WrongBranchError(NumericalRegimeError):
    """h ≥ τ(x) 时不存在所需的最大代数根。"""

    __test__ = False


class GeometryError(NumericalRegimeError):
    """差分模板或网格覆盖了源点。"""

    __test__ = False


class UnsupportedModeError(NumericalRegimeError):
    """请求了表中标记为不可用的模式系数。"""

    __test__ = False


class NonLocalViscosityError(NumericalRegimeError):
    """粘性算子无法写成微分算子。"""

    __test__ = False


class AccuracyError(AnisoGreenError):
    """数值积分或迭代在预算内未达到目标精度。"""

    __test__ = False
    exit_code = EXIT_ACCURACY_ERROR

    def __init__(
        self, message: str, *, achieved_tolerance: float, evaluations: int
    ) -> None:
        super().__init__(
            f"{message} (achieved {achieved_tolerance:.3e} after {evaluations} evaluations)"
        )
        self.achieved_tolerance = float(achieved_tolerance)
        self.evaluations = int(evaluations)


__all__ = [
    "EXIT_ACCURACY_ERROR",
    "EXIT_CONFIG_ERROR",
    "EXIT_OK",
    "EXIT_REGIME_ERROR",
    "AccuracyError",
    "AnisoGreenError",
    "CatalogError",
    "ConfigError",
    "DegenerateDirectionError",
    "DomainError",
    "FieldFormatError",
    "GeometryError",
    "NonLocalViscosityError",
    "NumericalRegimeError",
    "OutOfRegimeError",
    "SingularPointError",
    "UnsupportedModeError",
    "WrongBranchError",
]
