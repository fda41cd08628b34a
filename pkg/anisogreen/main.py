"""Command-line entry point: ``anisogreen <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from anisogreen import __version__
from anisogreen.core.exceptions import EXIT_OK, AnisoGreenError, ConfigError
from anisogreen.core.logging_config import get_logger
from anisogreen.core.worker_pool import WorkerPool
from anisogreen.schemas.run_config import RunConfig, TaskKind
from anisogreen.services.christoffel import media_catalog_table
from anisogreen.services.config_parser import parse_config
from anisogreen.services.field_io import write_csv, write_manifest
from anisogreen.services.grid_evaluation import eval_grid, write_seismogram
from anisogreen.services.validation.runs import ValidationKind, run_validation

logger = get_logger("anisogreen.main")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anisogreen",
        description="Closed-form Green tensors for viscoelastic anisotropic media.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    grid = commands.add_parser("eval-grid", help="evaluate the Green tensor on a grid")
    grid.add_argument("--config", required=True, type=Path)
    grid.add_argument("--out", type=Path, default=None)

    trace = commands.add_parser("seismogram", help="synthesize a Ricker-source seismogram")
    trace.add_argument("--config", required=True, type=Path)
    trace.add_argument("--out", type=Path, default=None)

    validate = commands.add_parser("validate", help="run an independent numerical oracle")
    validate.add_argument("oracle", choices=[item.value for item in ValidationKind])
    validate.add_argument("--config", required=True, type=Path)
    validate.add_argument("--out", type=Path, default=None)

    media = commands.add_parser("media", help="media catalog")
    media.add_argument("action", choices=["list"])
    return parser


def _load(path: Path, task: TaskKind, accepted: tuple[TaskKind, ...]) -> RunConfig:
    config = parse_config(path, default_task=task)
    if config.task not in accepted:
        raise ConfigError(
            f"configuration is for task {config.task.value!r}, not {task.value!r}",
            key="run.task",
        )
    return config


def _out_dir(args: argparse.Namespace, config: RunConfig) -> Path:
    return args.out if args.out is not None else Path(config.output.directory)


def _command_line(argv: Sequence[str]) -> str:
    return " ".join(["anisogreen", *argv])


def _run_eval_grid(args: argparse.Namespace, argv: Sequence[str]) -> int:
    config = _load(args.config, TaskKind.EVAL_GRID, (TaskKind.EVAL_GRID,))
    directory = _out_dir(args, config)
    with WorkerPool() as pool:
        files = eval_grid(config, directory, pool)
    write_manifest(directory, config.config_hash, _command_line(argv), files)
    return EXIT_OK


def _run_seismogram(args: argparse.Namespace, argv: Sequence[str]) -> int:
    config = _load(args.config, TaskKind.SEISMOGRAM, (TaskKind.SEISMOGRAM,))
    directory = _out_dir(args, config)
    files = write_seismogram(config, directory)
    write_manifest(directory, config.config_hash, _command_line(argv), files)
    return EXIT_OK


def _run_validate(args: argparse.Namespace, argv: Sequence[str]) -> int:
    kind = ValidationKind(args.oracle)
    task = TaskKind.EIGEN_CHECK if kind is ValidationKind.EIGEN else TaskKind.VALIDATE
    config = _load(args.config, task, (TaskKind.VALIDATE, TaskKind.EIGEN_CHECK))
    outcome = run_validation(kind, config)
    # 未给出 --out 时只打印摘要，不写文件
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        table = write_csv(outcome.table, args.out / f"validate_{kind.value}.csv")
        write_manifest(args.out, config.config_hash, _command_line(argv), [table])
    print(f"{kind.value}: {outcome.summary}")
    if outcome.failure is not None:
        raise outcome.failure
    return EXIT_OK


def _run_media(args: argparse.Namespace, argv: Sequence[str]) -> int:
    table: pd.DataFrame = media_catalog_table()
    print(table.to_string(index=False))
    return EXIT_OK


_HANDLERS = {
    "eval-grid": _run_eval_grid,
    "seismogram": _run_seismogram,
    "validate": _run_validate,
    "media": _run_media,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""

    arguments = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(arguments)
    try:
        return _HANDLERS[args.command](args, arguments)
    except AnisoGreenError as exc:
        logger.warning("命令 %s 失败: %s", args.command, exc)
        print(f"anisogreen: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def run() -> None:
    sys.exit(main())


__all__ = ["build_parser", "main", "run"]
