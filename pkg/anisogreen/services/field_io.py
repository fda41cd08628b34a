"""Readers and writers for grid volumes.

Binary layout (all little-endian)::

    b"AGRN1" | u32 n1 | u32 n2 | u32 n3 | u32 components | f64 (re, im) ...

values are ordered node by node (x index fastest), components inside a
node in row-major tensor order.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from anisogreen import __version__
from anisogreen.core.exceptions import FieldFormatError
from anisogreen.core.logging_config import get_logger
from anisogreen.schemas.field_volume import (
    TENSOR_COMPONENTS,
    FieldVolume,
    ManifestEntry,
    RunManifest,
)

logger = get_logger("anisogreen.field_io")

MAGIC = b"AGRN1"
HEADER = struct.Struct("<4I")
MANIFEST_NAME = "manifest.json"


def _component_names(components: int) -> list[str]:
    if components == TENSOR_COMPONENTS:
        return [f"G{k + 1}{l + 1}" for k in range(3) for l in range(3)]
    return ["value"]


def encode_binary(volume: FieldVolume) -> bytes:
    header = MAGIC + HEADER.pack(*volume.dims, volume.components)
    payload = np.ascontiguousarray(volume.data, dtype=np.complex128).view(np.float64)
    return header + payload.astype("<f8").tobytes()


def write_binary(volume: FieldVolume, path: Path) -> Path:
    path.write_bytes(encode_binary(volume))
    logger.info("已写出二进制场数据 %s", path.name)
    return path


def read_binary(path: Path) -> tuple[tuple[int, int, int], int, NDArray[np.complex128]]:
    """Return (dims, components, data) with data shaped (nodes, components)."""

    raw = Path(path).read_bytes()
    offset = len(MAGIC) + HEADER.size
    if len(raw) < offset or raw[: len(MAGIC)] != MAGIC:
        raise FieldFormatError(f"{path} is not an AGRN1 file")
    n1, n2, n3, components = HEADER.unpack_from(raw, len(MAGIC))
    nodes = n1 * n2 * n3
    expected = nodes * components * 16
    if len(raw) - offset != expected:
        raise FieldFormatError(
            f"{path}: payload has {len(raw) - offset} bytes, header implies {expected}"
        )
    values = np.frombuffer(raw, dtype="<f8", offset=offset).astype(np.float64)
    data = values.view(np.complex128).reshape(nodes, components)
    return (n1, n2, n3), components, data


def volume_frame(volume: FieldVolume, nodes: NDArray[np.float64]) -> pd.DataFrame:
    """One row per node: grid indices, coordinates, then (re, im) per component."""

    n1, n2, _ = volume.dims
    index = np.arange(volume.node_count)
    columns: dict[str, NDArray] = {
        "i": index % n1,
        "j": (index // n1) % n2,
        "k": index // (n1 * n2),
        "x1": nodes[:, 0],
        "x2": nodes[:, 1],
        "x3": nodes[:, 2],
    }
    for position, name in enumerate(_component_names(volume.components)):
        columns[f"{name}_re"] = volume.data[:, position].real
        columns[f"{name}_im"] = volume.data[:, position].imag
    return pd.DataFrame(columns)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    logger.info("已写出 CSV %s", path.name)
    return path


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(
    directory: Path, config_hash: str, command: str, files: list[Path]
) -> Path:
    manifest = RunManifest(
        version=__version__,
        config_hash=config_hash,
        command=command,
        files=[
            ManifestEntry(name=path.name, sha256=sha256_file(path), bytes=path.stat().st_size)
            for path in sorted(files, key=lambda item: item.name)
        ],
    )
    target = directory / MANIFEST_NAME
    target.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("已写出运行清单，共 %s 个文件", len(manifest.files))
    return target


__all__ = [
    "MAGIC",
    "MANIFEST_NAME",
    "encode_binary",
    "read_binary",
    "sha256_file",
    "volume_frame",
    "write_binary",
    "write_csv",
    "write_manifest",
]
