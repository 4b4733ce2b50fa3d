import logging
from typing import Dict, Type

import pandas as pd
from pydantic import BaseModel

from db import SCHEMA_VERSION, envelope, read_json, validated, write_json, write_text
from utils.conditions import ConditionReport
from utils.errors import InvalidInput
from utils.ms_functional import MSScanResult
from utils.scenarios import ScenarioReport

logger = logging.getLogger(__name__)

# CSV 부동소수 형식 (스레드 수와 무관하게 같은 바이트)
CSV_FLOAT_FORMAT = "%.17g"

REPORT_KINDS: Dict[str, Type[BaseModel]] = {
    "condition_report": ConditionReport,
    "ms_scan": MSScanResult,
    "scenario_report": ScenarioReport,
}


def kind_of(report: BaseModel) -> str:
    for kind, model in REPORT_KINDS.items():
        if isinstance(report, model):
            return kind
    raise InvalidInput(f"알 수 없는 보고서 종류: {type(report).__name__}")


def write_report(path: str, report: BaseModel) -> None:
    """보고서를 스키마 봉투와 함께 JSON 으로 저장"""
    write_json(path, envelope(kind_of(report), report))


def parse_report(data) -> BaseModel:
    """
    저장된 보고서 봉투를 다시 모델로 읽습니다.

    Args:
        data: {"schema_version", "kind", "data"}

    Returns:
        ConditionReport, MSScanResult 또는 ScenarioReport
    """
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise InvalidInput(f"지원하지 않는 보고서 스키마 버전: {data.get('schema_version') if isinstance(data, dict) else None}")
    model = REPORT_KINDS.get(data.get("kind"))
    if model is None:
        raise InvalidInput(f"알 수 없는 보고서 종류: {data.get('kind')!r}")
    with validated("보고서"):
        return model.model_validate(data["data"])


def read_report(path: str) -> BaseModel:
    return parse_report(read_json(path))


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_csv(path: str, frame: pd.DataFrame) -> None:
    write_text(path, frame_to_csv(frame))
