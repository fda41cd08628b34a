"""Strict parser for the ``section.key = value`` run configuration format."""

from __future__ import annotations

import hashlib
from collections.abc import Callable
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from anisogreen.core.exceptions import CatalogError, ConfigError
from anisogreen.core.logging_config import get_logger
from anisogreen.schemas.medium import STIFFNESS_KEYS
from anisogreen.schemas.run_config import RunConfig, TaskKind

logger = get_logger("anisogreen.config_parser")

COMMENT_PREFIXES = ("#", ";")


def _float(text: str) -> float:
    return float(text)


def _int(text: str) -> int:
    return int(text)


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats3(text: str) -> tuple[float, float, float]:
    parts = [item.strip() for item in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated values, got {len(parts)}")
    return (float(parts[0]), float(parts[1]), float(parts[2]))


def _ints3(text: str) -> tuple[int, int, int]:
    parts = [item.strip() for item in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated integers, got {len(parts)}")
    return (int(parts[0]), int(parts[1]), int(parts[2]))


def _names(text: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in text.split(",") if item.strip())


def _text(text: str) -> str:
    return text


# 允许出现的全部键及其类型转换函数
KNOWN_KEYS: dict[str, Callable[[str], Any]] = {
    "run.task": _text,
    "medium.kind": _text,
    "medium.rho": _float,
    **{f"medium.{name}": _float for name in STIFFNESS_KEYS},
    "medium.beta1": _float,
    "medium.beta2": _float,
    "medium.beta3": _float,
    "medium.gamma": _float,
    "grid.origin": _floats3,
    "grid.spacing": _floats3,
    "grid.dims": _ints3,
    "frequency.omega": _float,
    "frequency.omega_min": _float,
    "frequency.omega_max": _float,
    "frequency.count": _int,
    "output.directory": _text,
    "output.formats": _names,
    "output.plot_scripts": _bool,
    "seismogram.receiver": _floats3,
    "seismogram.peak_frequency": _float,
    "seismogram.delay": _float,
    "seismogram.dt": _float,
    "seismogram.duration": _float,
    "validation.fd_order": _int,
    "validation.spacing": _float,
    "validation.refinements": _int,
    "validation.samples": _int,
    "validation.seed": _int,
    "validation.radius": _float,
}


def _read_pairs(text: str) -> tuple[dict[str, Any], dict[str, int]]:
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'section.key = value', got {line!r}", line=number)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", key=key, line=number)
        if key in values:
            raise ConfigError(
                f"duplicate key (first given on line {lines[key]})", key=key, line=number
            )
        if not value:
            raise ConfigError("missing value", key=key, line=number)
        try:
            values[key] = KNOWN_KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"cannot parse {value!r}: {exc}", key=key, line=number) from exc
        lines[key] = number
    return values, lines


def _loc_to_key(loc: tuple[Any, ...]) -> str:
    """pydantic 错误位置转换为配置键名。"""

    parts = [str(item) for item in loc if not isinstance(item, int)]
    if not parts:
        return "run"
    if parts[0] == "medium" and len(parts) > 1:
        if parts[1] == "beta":
            index = next((item for item in loc if isinstance(item, int)), 0)
            return f"medium.beta{index + 1}"
        if parts[1] == "stiffness" and len(parts) > 2:
            return f"medium.{parts[2]}"
        return f"medium.{parts[1]}"
    if parts[0] == "task":
        return "run.task"
    return ".".join(parts[:2])


def _nest(values: dict[str, Any]) -> dict[str, Any]:
    data: dict[str, Any] = {}
    medium: dict[str, Any] = {"stiffness": {}}
    betas = [0.0, 0.0, 0.0]
    for key, value in values.items():
        section, _, name = key.partition(".")
        if section == "run":
            data["task"] = value
        elif section == "medium":
            if name in STIFFNESS_KEYS:
                medium["stiffness"][name] = value
            elif name.startswith("beta"):
                betas[int(name[-1]) - 1] = value
            else:
                medium[name] = value
        else:
            data.setdefault(section, {})[name] = value
    medium["beta"] = tuple(betas)
    data["medium"] = medium
    return data


def parse_text(
    text: str, *, default_task: TaskKind | str | None = None, config_hash: str = ""
) -> RunConfig:
    values, lines = _read_pairs(text)
    data = _nest(values)
    if "task" not in data:
        if default_task is None:
            raise ConfigError("missing required key", key="run.task")
        data["task"] = TaskKind(default_task)
    data["config_hash"] = config_hash
    if "kind" not in data["medium"]:
        raise ConfigError("missing required key", key="medium.kind")
    if "rho" not in data["medium"]:
        raise ConfigError("missing required key", key="medium.rho")
    try:
        return RunConfig.model_validate(data)
    except ConfigError as exc:
        line = lines.get(exc.key or "")
        raise type(exc)(exc.detail, key=exc.key, line=line) from exc
    except ValidationError as exc:
        error = exc.errors()[0]
        key = _loc_to_key(tuple(error["loc"]))
        error_type = CatalogError if key == "medium.kind" else ConfigError
        raise error_type(error["msg"], key=key, line=lines.get(key)) from exc


def parse_config(path: str | Path, *, default_task: TaskKind | str | None = None) -> RunConfig:
    """Parse a run configuration file; every failure names the key and line."""

    source = Path(path)
    try:
        raw = source.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {source}: {exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(
            f"configuration {source} is not valid UTF-8 (byte {exc.start})"
        ) from exc
    config = parse_text(
        text,
        default_task=default_task,
        config_hash=hashlib.sha256(raw).hexdigest(),
    )
    logger.info(
        "已解析配置 %s: 介质 %s, 任务 %s", source.name, config.medium.kind.value, config.task.value
    )
    return config


__all__ = ["KNOWN_KEYS", "parse_config", "parse_text"]
