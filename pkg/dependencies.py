# dependencies.py

import logging
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import psutil
from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240917

T = TypeVar("T")
R = TypeVar("R")


def _default_threads() -> int:
    return psutil.cpu_count(logical=False) or 1


class Settings(BaseModel):
    """프로세스 단위 설정 (.env → 환경 변수 → CLI 플래그 순으로 덮어씀, 단 HOMTYPE_THREADS가 최우선)"""
    threads: int = Field(default_factory=_default_threads, ge=1)
    seed: int = DEFAULT_SEED
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, threads: Optional[int] = None, seed: Optional[int] = None) -> "Settings":
        env_threads = os.getenv("HOMTYPE_THREADS")
        env_seed = os.getenv("HOMTYPE_SEED")
        values = {}
        if env_threads:
            values["threads"] = int(env_threads)
        elif threads is not None:
            values["threads"] = threads
        if seed is not None:
            values["seed"] = seed
        elif env_seed:
            values["seed"] = int(env_seed)
        if os.getenv("HOMTYPE_LOG_LEVEL"):
            values["log_level"] = os.getenv("HOMTYPE_LOG_LEVEL").upper()
        return cls(**values)


_settings: Optional[Settings] = None
# 스레드 풀 (단일 인스턴스 보장용)
_thread_executor: Optional[ThreadPoolExecutor] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def configure(settings: Settings) -> Settings:
    """CLI가 결정한 설정을 등록하고 기존 스레드 풀을 정리합니다."""
    global _settings, _thread_executor
    _settings = settings
    if _thread_executor is not None:
        _thread_executor.shutdown(wait=True)
        _thread_executor = None
    return settings


def get_executor() -> ThreadPoolExecutor:
    global _thread_executor
    if _thread_executor is None:
        workers = get_settings().threads
        _thread_executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="homtype")
        logger.debug("스레드 풀 생성: workers=%d", workers)
    return _thread_executor


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """입력 순서를 유지하는 병렬 map (작업 1개 이하, 스레드 1개, 풀 내부 호출이면 직접 실행)"""
    items = list(items)
    # 풀 작업 안에서 다시 풀을 기다리면 교착되므로 중첩 호출은 순차 실행
    nested = threading.current_thread().name.startswith("homtype")
    if len(items) <= 1 or nested or get_settings().threads == 1:
        return [fn(x) for x in items]
    return list(get_executor().map(fn, items))
