from __future__ import annotations

import os
from functools import lru_cache
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level configuration loaded from environment variables."""

    APP_ENV: str = "development"
    # 是否启用测试模式，用于控制 DEBUG 级别日志的输出
    APP_TEST_MODE: bool = False
    # 网格计算的工作线程上限，未设置时使用 CPU 核数
    ANISOGREEN_THREADS: int | None = None
    ANISOGREEN_LOG_TIMEZONE: str = "Asia/Shanghai"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("ANISOGREEN_THREADS", mode="before")
    @classmethod
    def parse_thread_cap(cls, value: object) -> int | None:
        if value is None:
            return None
        if isinstance(value, str):
            if not value.strip():
                return None
            value = int(value.strip())
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError("ANISOGREEN_THREADS must be an integer")
        if value < 1:
            msg = "ANISOGREEN_THREADS must be at least 1"
            raise ValueError(msg)
        return value

    @field_validator("ANISOGREEN_LOG_TIMEZONE")
    @classmethod
    def validate_timezone(cls, value: str) -> str:
        try:
            ZoneInfo(value)
        except (ZoneInfoNotFoundError, ValueError) as exc:
            msg = f"unknown time zone: {value}"
            raise ValueError(msg) from exc
        return value

    def worker_count(self) -> int:
        """返回实际使用的工作线程数量。"""

        available = os.cpu_count() or 1
        if self.ANISOGREEN_THREADS is None:
            return available
        return self.ANISOGREEN_THREADS


@lru_cache
def get_settings() -> Settings:
    """Return a cached settings instance."""

    return Settings()


settings = get_settings()
