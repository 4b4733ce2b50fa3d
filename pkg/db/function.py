import logging
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, model_validator

from db import read_json, validated
from utils.errors import InvalidInput, LengthMismatch
from utils.norm_specs import MaximalWeight
from utils.space_core import AnySpace, FinitePointSpace, IntervalDomain1D, StepFunction1D

logger = logging.getLogger(__name__)


class PointValuesFile(BaseModel):
    """유한 공간 위 함수: 점별 값 목록 또는 라벨 → 값 (나머지는 default)"""
    values: Optional[List[float]] = None
    sparse: Optional[Dict[str, float]] = None
    default: float = 0.0

    @model_validator(mode="after")
    def _one_form(self):
        if (self.values is None) == (self.sparse is None):
            raise ValueError("values 와 sparse 중 정확히 하나가 필요합니다")
        return self


def parse_function(data, space: AnySpace) -> Union[np.ndarray, StepFunction1D]:
    """
    함수 정의를 공간에 맞춰 해석합니다.

    Args:
        data: 구간 공간이면 {"breakpoints", "values"}, 유한 공간이면 {"values"} 또는 {"sparse"}
        space: 함수가 정의된 공간

    Returns:
        StepFunction1D 또는 점별 값 배열
    """
    if isinstance(space, IntervalDomain1D):
        with validated("계단함수 파일"):
            return StepFunction1D.model_validate(data)
    with validated("함수 파일"):
        spec = PointValuesFile.model_validate(data)
    if spec.values is not None:
        values = np.asarray(spec.values, dtype=float)
        if values.shape != (space.n_points,):
            raise LengthMismatch(f"값 {values.size}개, 점 {space.n_points}개")
        return values
    values = np.full(space.n_points, spec.default)
    for label, v in spec.sparse.items():
        # "#3" 은 인덱스, 그 밖에는 라벨
        values[space.point_index(label)] = v
    return values


def load_function(path: str, space: AnySpace):
    return parse_function(read_json(path), space)


def parse_weight(data, space: AnySpace):
    """가중치: {"values": [...]} 목록이거나 maximal_indicator 형태"""
    if isinstance(data, dict) and data.get("kind") == "maximal_indicator":
        with validated("가중치 파일"):
            return MaximalWeight.model_validate(data)
    if isinstance(data, dict) and "values" in data:
        data = data["values"]
    if not isinstance(data, list):
        raise InvalidInput("가중치 파일은 값 목록이거나 maximal_indicator 형태여야 합니다")
    if isinstance(space, FinitePointSpace) and len(data) != space.n_points:
        raise LengthMismatch(f"가중치 {len(data)}개, 점 {space.n_points}개")
    return [float(v) for v in data]


def load_weight(path: str, space: AnySpace):
    return parse_weight(read_json(path), space)


def parse_subset(data, space: AnySpace):
    """WMD 부분집합: 유한 공간은 점 목록, 구간 공간은 구간 목록"""
    if isinstance(data, dict):
        data = data.get("points", data.get("intervals"))
    if not isinstance(data, list) or not data:
        raise InvalidInput("부분집합 파일은 비어 있지 않은 points 또는 intervals 목록이어야 합니다")
    if isinstance(space, IntervalDomain1D):
        with validated("부분집합 파일"):
            return IntervalDomain1D(intervals=[tuple(iv) for iv in data], whole_line=True)
    return data


def load_subset(path: str, space: AnySpace):
    return parse_subset(read_json(path), space)
