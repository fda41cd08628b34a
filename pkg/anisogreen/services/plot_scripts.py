from __future__ import annotations

from pathlib import Path

from anisogreen.core.logging_config import get_logger
from anisogreen.schemas.field_volume import FieldVolume

logger = get_logger("anisogreen.plot_scripts")

_SLICE_TEMPLATE = '''# config-hash: {config_hash}
# anisogreen {version}: |G11| on grid slice k = {slice_index}, omega = {omega:g} rad/s
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

frame = pd.read_csv("{csv_name}")
plane = frame[frame["k"] == {slice_index}]
amplitude = np.hypot(plane["G11_re"], plane["G11_im"]).to_numpy().reshape({n2}, {n1})
extent = ({x_min!r}, {x_max!r}, {y_min!r}, {y_max!r})
plt.imshow(amplitude, origin="lower", extent=extent)
plt.colorbar(label="|G11|")
plt.xlabel("x1 [m]")
plt.ylabel("x2 [m]")
plt.title("|G11|, omega = {omega:g} rad/s")
plt.savefig("{stem}_G11.png", dpi=150)
'''

_TRACE_TEMPLATE = '''# config-hash: {config_hash}
# anisogreen {version}: displacement traces at x = {receiver}
import matplotlib.pyplot as plt
import pandas as pd

frame = pd.read_csv("{csv_name}")
figure, axes = plt.subplots(3, 3, sharex=True, figsize=(10, 8))
for k in range(3):
    for l in range(3):
        axes[k, l].plot(frame["t"], frame[f"u{{k + 1}}{{l + 1}}"])
        axes[k, l].set_title(f"u{{k + 1}}{{l + 1}}")
for axis in axes[-1]:
    axis.set_xlabel("t [s]")
figure.tight_layout()
figure.savefig("{stem}.png", dpi=150)
'''


def clamp_slice(index: int, size: int) -> int:
    return min(max(index, 0), size - 1)


def emit_plot_scripts(
    volume: FieldVolume,
    csv_path: Path,
    directory: Path,
    slice_index: int | None = None,
) -> list[Path]:
    """Write a plotting script for the |G11| slice of a CSV-exported volume."""

    n1, n2, n3 = volume.dims
    index = clamp_slice(n3 // 2 if slice_index is None else slice_index, n3)
    x_min = volume.origin[0]
    y_min = volume.origin[1]
    text = _SLICE_TEMPLATE.format(
        config_hash=volume.provenance.config_hash,
        version=volume.provenance.tool_version,
        slice_index=index,
        omega=volume.provenance.omega,
        csv_name=csv_path.name,
        n1=n1,
        n2=n2,
        x_min=x_min,
        x_max=x_min + (n1 - 1) * volume.spacing[0],
        y_min=y_min,
        y_max=y_min + (n2 - 1) * volume.spacing[1],
        stem=csv_path.stem,
    )
    target = directory / f"plot_{csv_path.stem}.py"
    target.write_text(text, encoding="utf-8")
    logger.info("已生成绘图脚本 %s", target.name)
    return [target]


def emit_trace_script(
    csv_path: Path,
    directory: Path,
    *,
    config_hash: str,
    version: str,
    receiver: tuple[float, float, float],
) -> Path:
    text = _TRACE_TEMPLATE.format(
        config_hash=config_hash,
        version=version,
        receiver=", ".join(f"{item:g}" for item in receiver),
        csv_name=csv_path.name,
        stem=csv_path.stem,
    )
    target = directory / f"plot_{csv_path.stem}.py"
    target.write_text(text, encoding="utf-8")
    logger.info("已生成绘图脚本 %s", target.name)
    return target


__all__ = ["clamp_slice", "emit_plot_scripts", "emit_trace_script"]
