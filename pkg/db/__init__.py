import json
import logging
import os
from contextlib import contextmanager
from typing import Any, Dict

from pydantic import BaseModel, ValidationError

from utils.errors import InvalidInput

logger = logging.getLogger(__name__)

# 보고서 JSON 봉투의 스키마 버전
SCHEMA_VERSION = 1


@contextmanager
def validated(what: str):
    """pydantic 검증 오류를 InvalidInput 으로 바꿉니다."""
    try:
        yield
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise InvalidInput(f"{what} 형식이 올바르지 않습니다 ({where}): {first['msg']}")


def read_json(path: str) -> Any:
    """
    JSON 파일을 읽습니다.

    Args:
        path: 파일 경로

    Returns:
        파싱된 JSON 값
    """
    if not os.path.exists(path):
        raise InvalidInput(f"파일이 없습니다: {path}")
    try:
        with open(path, encoding="utf-8") as fp:
            return json.load(fp)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"JSON 파싱 실패 ({path}): {e}")


def dumps(payload: Any) -> str:
    """고정 키 순서의 JSON 텍스트"""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        fp.write(text)
    logger.info("파일 저장: %s", path)


def write_json(path: str, payload: Any) -> None:
    write_text(path, dumps(payload))


def envelope(kind: str, payload: Any) -> Dict[str, Any]:
    """보고서를 스키마 버전과 종류가 붙은 봉투로 감쌉니다."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "data": payload}


__all__ = ["SCHEMA_VERSION", "validated", "read_json", "dumps", "write_text", "write_json", "envelope"]
