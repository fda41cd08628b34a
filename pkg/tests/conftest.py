from __future__ import annotations

from pathlib import Path

import pytest

from anisogreen.schemas.medium import MediumKind, MediumSpec

MEDIUM_I_STIFFNESS = {
    "c11": 9.0,
    "c22": 6.0,
    "c33": 4.0,
    "c44": 1.5,
    "c55": 2.0,
    "c66": 2.5,
}
MEDIUM_II_STIFFNESS = {"c11": 8.0, "c12": 2.0, "c33": 5.0, "c44": 1.5}
MEDIUM_III_STIFFNESS = {"c11": 6.0, "c44": 1.5, "c66": 2.5}
ISOTROPIC_STIFFNESS = {"c11": 6.0, "c44": 2.0}

STIFFNESS = {
    MediumKind.MEDIUM_I: MEDIUM_I_STIFFNESS,
    MediumKind.MEDIUM_II: MEDIUM_II_STIFFNESS,
    MediumKind.MEDIUM_III: MEDIUM_III_STIFFNESS,
    MediumKind.ISOTROPIC: ISOTROPIC_STIFFNESS,
}

MINIMAL_MEDIUM_I_CONFIG = """\
# 最小的介质 I 配置
medium.kind = I
medium.rho = 1.0
medium.c11 = 9
medium.c22 = 6
medium.c33 = 4
medium.c44 = 1.5
medium.c55 = 2
medium.c66 = 2.5
"""


def make_medium(
    kind: MediumKind | str,
    *,
    beta: tuple[float, float, float] = (0.0, 0.0, 0.0),
    gamma: float = 2.0,
    rho: float = 1.0,
    **overrides: float,
) -> MediumSpec:
    kind = MediumKind(kind)
    stiffness = {**STIFFNESS[kind], **overrides}
    return MediumSpec(kind=kind, rho=rho, stiffness=stiffness, beta=beta, gamma=gamma)


@pytest.fixture()
def medium1() -> MediumSpec:
    return make_medium(MediumKind.MEDIUM_I)


@pytest.fixture()
def medium2() -> MediumSpec:
    return make_medium(MediumKind.MEDIUM_II)


@pytest.fixture()
def medium3() -> MediumSpec:
    return make_medium(MediumKind.MEDIUM_III)


@pytest.fixture()
def isotropic() -> MediumSpec:
    return make_medium(MediumKind.ISOTROPIC)


@pytest.fixture(params=list(MediumKind), ids=lambda kind: kind.value)
def any_medium(request: pytest.FixtureRequest) -> MediumSpec:
    return make_medium(request.param)


@pytest.fixture()
def write_config(tmp_path: Path):
    """写出配置文件并返回路径。"""

    def _write(text: str, name: str = "run.cfg") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
