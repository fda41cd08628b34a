from __future__ import annotations

import threading
from dataclasses import dataclass

import pandas as pd

from anisogreen.core.exceptions import AnisoGreenError


class PairingRegistryError(AnisoGreenError):
    """闭式解与校验器配对登记的基础异常。"""

    __test__ = False


class UnknownClosedFormError(PairingRegistryError):
    """查询了尚未登记配对的闭式解。"""

    __test__ = False


@dataclass(frozen=True, slots=True)
class OraclePairing:
    """一个闭式解、校验它的独立数值方法以及对应测试。"""

    closed_form: str
    oracle: str
    test: str

    @property
    def test_file(self) -> str:
        return self.test.split("::", 1)[0]

    @property
    def test_function(self) -> str:
        return self.test.split("::", 1)[1]


class OraclePairingRegistry:
    """管理闭式解与校验器的配对关系。"""

    def __init__(self) -> None:
        self._pairings: dict[str, list[OraclePairing]] = {}
        self._lock = threading.RLock()

    def register(self, pairing: OraclePairing) -> None:
        with self._lock:
            entries = self._pairings.setdefault(pairing.closed_form, [])
            if pairing in entries:
                raise PairingRegistryError(
                    f"pairing {pairing.closed_form} -> {pairing.oracle} already registered"
                )
            entries.append(pairing)

    def unregister(self, closed_form: str) -> None:
        with self._lock:
            self._pairings.pop(closed_form, None)

    def get(self, closed_form: str) -> list[OraclePairing]:
        try:
            return list(self._pairings[closed_form])
        except KeyError as exc:
            raise UnknownClosedFormError(
                f"closed form {closed_form} has no registered oracle"
            ) from exc

    def list_pairings(self) -> list[OraclePairing]:
        with self._lock:
            return [item for entries in self._pairings.values() for item in entries]

    def missing(self, closed_forms: tuple[str, ...] | list[str]) -> list[str]:
        with self._lock:
            return [name for name in closed_forms if not self._pairings.get(name)]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"closed_form": item.closed_form, "oracle": item.oracle, "test": item.test}
                for item in self.list_pairings()
            ],
            columns=["closed_form", "oracle", "test"],
        )


BUILTIN_PAIRINGS = (
    OraclePairing(
        "loss_symbol",
        "kernel_ft_oracle",
        "tests/test_kernel_ft.py::test_loss_symbol_matches_kernel_transform",
    ),
    OraclePairing(
        "eigenstructure",
        "dense_eigensolver",
        "tests/test_eigensolver.py::test_eigenstructure_matches_jacobi_oracle",
    ),
    OraclePairing(
        "closed_integrals",
        "reference_quadrature",
        "tests/test_potential.py::test_closed_integrals_match_reference_quadrature",
    ),
    OraclePairing(
        "hessian_case1",
        "hessian_general",
        "tests/test_potential.py::test_case1_matches_general_evaluator",
    ),
    OraclePairing(
        "hessian_case1",
        "fd_hessian",
        "tests/test_potential.py::test_static_case1_matches_fd_hessian_of_potential",
    ),
    OraclePairing(
        "hessian_case2",
        "hessian_general",
        "tests/test_potential.py::test_case2_matches_general_evaluator",
    ),
    OraclePairing(
        "green_medium1",
        "fd_residual",
        "tests/test_residual.py::test_elastic_residual_converges_at_fourth_order",
    ),
    OraclePairing(
        "green_medium2",
        "fd_residual",
        "tests/test_residual.py::test_elastic_residual_converges_at_fourth_order",
    ),
    OraclePairing(
        "green_medium3",
        "fd_residual",
        "tests/test_residual.py::test_elastic_residual_converges_at_fourth_order",
    ),
    OraclePairing(
        "green_isotropic",
        "fd_residual",
        "tests/test_residual.py::test_elastic_residual_converges_at_fourth_order",
    ),
    OraclePairing(
        "green_medium3",
        "fd_residual",
        "tests/test_residual.py::test_viscous_residual_floor_scales_with_beta_squared",
    ),
)


_REGISTRY_SINGLETON = OraclePairingRegistry()


def get_pairing_registry() -> OraclePairingRegistry:
    """获取全局配对登记表实例。"""

    return _REGISTRY_SINGLETON


def register_builtin_pairings(registry: OraclePairingRegistry | None = None) -> None:
    target = registry or _REGISTRY_SINGLETON
    for pairing in BUILTIN_PAIRINGS:
        if pairing not in target.list_pairings():
            target.register(pairing)


register_builtin_pairings()


__all__ = [
    "BUILTIN_PAIRINGS",
    "OraclePairing",
    "OraclePairingRegistry",
    "PairingRegistryError",
    "UnknownClosedFormError",
    "get_pairing_registry",
    "register_builtin_pairings",
]
