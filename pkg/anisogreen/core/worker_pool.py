from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from anisogreen.core.config import get_settings
from anisogreen.core.logging_config import get_logger

T = TypeVar("T")
R = TypeVar("R")

logger = get_logger("anisogreen.worker_pool")


class WorkerPool:
    """线程池包装，按输入顺序返回结果以保证输出确定性。"""

    def __init__(self, max_workers: int | None = None) -> None:
        if max_workers is None:
            max_workers = get_settings().worker_count()
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        self.max_workers = max_workers
        self._executor: ThreadPoolExecutor | None = None
        if max_workers > 1:
            self._executor = ThreadPoolExecutor(
                max_workers=max_workers, thread_name_prefix="anisogreen"
            )

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        # 单线程时直接在调用线程执行，便于调试与确定性对比
        if self._executor is None:
            return [fn(item) for item in items]
        return list(self._executor.map(fn, items))

    def shutdown(self, wait: bool = True) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=wait)
            self._executor = None

    def __enter__(self) -> WorkerPool:
        logger.debug("启动工作线程池，线程数 %s", self.max_workers)
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.shutdown()


__all__ = ["WorkerPool"]
