from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from anisogreen import __version__
from anisogreen.core.exceptions import ConfigError
from anisogreen.core.logging_config import get_logger
from anisogreen.core.worker_pool import WorkerPool
from anisogreen.schemas.field_volume import TENSOR_COMPONENTS, FieldVolume, Provenance
from anisogreen.schemas.run_config import OutputFormat, RunConfig
from anisogreen.services.field_io import volume_frame, write_binary, write_csv
from anisogreen.services.green import check_regime, green_grid, time_domain
from anisogreen.services.plot_scripts import emit_plot_scripts, emit_trace_script
from anisogreen.services.wavelets import RickerWavelet

logger = get_logger("anisogreen.grid_evaluation")


def evaluate_volume(
    config: RunConfig, omega: float, pool: WorkerPool | None = None
) -> FieldVolume:
    grid = config.grid
    if grid is None:
        raise ConfigError("eval-grid needs a grid block", key="grid.dims")
    node = grid.source_node()
    if node is not None:
        raise ConfigError(f"grid node {node} coincides with the source", key="grid.origin")
    values = green_grid(config.medium, grid.nodes(), omega, pool)
    return FieldVolume(
        origin=grid.origin,
        spacing=grid.spacing,
        dims=grid.dims,
        components=TENSOR_COMPONENTS,
        data=values.reshape(grid.node_count, TENSOR_COMPONENTS),
        provenance=Provenance(
            config_hash=config.config_hash,
            tool_version=__version__,
            omega=omega,
            medium_kind=config.medium.kind.value,
        ),
    )


def eval_grid(
    config: RunConfig, directory: Path, pool: WorkerPool | None = None
) -> list[Path]:
    """Evaluate Ĝ on the grid for every requested ω; one file per ω and format."""

    if config.grid is None or config.frequency is None:
        raise ConfigError("eval-grid needs grid and frequency blocks", key="grid.dims")
    frequencies = config.frequency.values()
    check_regime(config.medium, frequencies)
    directory.mkdir(parents=True, exist_ok=True)
    nodes = config.grid.nodes()
    written: list[Path] = []
    owned = pool is None
    pool = pool or WorkerPool()
    try:
        logger.info(
            "开始网格求值: %s 个节点, %s 个频点, %s 个线程",
            config.grid.node_count,
            len(frequencies),
            pool.max_workers,
        )
        for index, omega in enumerate(frequencies):
            volume = evaluate_volume(config, omega, pool)
            stem = f"green_w{index:03d}"
            if OutputFormat.BIN in config.output.formats:
                written.append(write_binary(volume, directory / f"{stem}.agrn"))
            if OutputFormat.CSV in config.output.formats:
                csv_path = write_csv(volume_frame(volume, nodes), directory / f"{stem}.csv")
                written.append(csv_path)
                if config.output.plot_scripts:
                    written.extend(emit_plot_scripts(volume, csv_path, directory))
            logger.info("频点 %s/%s 完成: omega=%g", index + 1, len(frequencies), omega)
    finally:
        if owned:
            pool.shutdown()
    return written


def write_seismogram(config: RunConfig, directory: Path) -> list[Path]:
    block = config.seismogram
    if block is None:
        raise ConfigError("seismogram task needs a seismogram block", key="seismogram.receiver")
    wavelet = RickerWavelet(block.peak_frequency, block.delay)
    record = time_domain(config.medium, block.receiver, wavelet, block.dt, block.duration)
    directory.mkdir(parents=True, exist_ok=True)
    columns: dict[str, np.ndarray] = {"t": record.times}
    for k in range(3):
        for l in range(3):
            columns[f"u{k + 1}{l + 1}"] = record.samples[k, l]
    csv_path = write_csv(pd.DataFrame(columns), directory / "seismogram.csv")
    written = [csv_path]
    if config.output.plot_scripts:
        written.append(
            emit_trace_script(
                csv_path,
                directory,
                config_hash=config.config_hash,
                version=__version__,
                receiver=block.receiver,
            )
        )
    return written


__all__ = ["eval_grid", "evaluate_volume", "write_seismogram"]
