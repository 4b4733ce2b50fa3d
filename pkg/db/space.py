import logging
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, TypeAdapter

from db import read_json, validated
from utils.space_core import (
    AnySpace, IntervalDomain1D, build_finite_space, double_exponential_space, geometric_space,
)

logger = logging.getLogger(__name__)


class FiniteSpaceFile(BaseModel):
    type: Literal["finite"]
    masses: List[float]
    distances: List[List[float]]
    k0: Optional[float] = None
    log_scale: bool = False
    labels: Optional[List[str]] = None


class IntervalSpaceFile(BaseModel):
    type: Literal["intervals"]
    intervals: List[Tuple[float, float]]
    whole_line: bool = False
    density_exponent: float = 0.0


class DoubleExponentialFile(BaseModel):
    type: Literal["double_exponential"]
    k_max: int = 60


class GeometricFile(BaseModel):
    type: Literal["geometric"]
    k_max: int = 40
    base: float = 2.0
    mass_exponent: float = 1.0


SpaceFile = Annotated[
    Union[FiniteSpaceFile, IntervalSpaceFile, DoubleExponentialFile, GeometricFile],
    Field(discriminator="type"),
]
SPACE_FILE_ADAPTER = TypeAdapter(SpaceFile)


def parse_space(data) -> AnySpace:
    """
    공간 정의(dict)를 검증하고 공간 객체로 만듭니다.

    Args:
        data: {"type": "finite" | "intervals" | "double_exponential" | "geometric", ...}

    Returns:
        FinitePointSpace 또는 IntervalDomain1D
    """
    with validated("공간 파일"):
        spec = SPACE_FILE_ADAPTER.validate_python(data)
        if isinstance(spec, IntervalSpaceFile):
            return IntervalDomain1D(intervals=spec.intervals, whole_line=spec.whole_line,
                                    density_exponent=spec.density_exponent)
    if isinstance(spec, FiniteSpaceFile):
        return build_finite_space(spec.distances, spec.masses, spec.k0, spec.labels, spec.log_scale)
    if isinstance(spec, DoubleExponentialFile):
        return double_exponential_space(spec.k_max)
    return geometric_space(spec.k_max, spec.base, spec.mass_exponent)


def load_space(path: str) -> AnySpace:
    space = parse_space(read_json(path))
    logger.info("공간 로드: %s", path)
    return space
