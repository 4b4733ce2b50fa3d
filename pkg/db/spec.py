import logging
import os

from db import read_json, validated
from utils.errors import InvalidInput
from utils.log_scalar import parse_number
from utils.ms_functional import ALL, RegionSpec
from utils.norm_specs import NormSpec, parse_norm_spec

logger = logging.getLogger(__name__)


def load_norm_spec(path: str) -> NormSpec:
    """노름 명세 파일 (type 태그가 붙은 JSON)"""
    return parse_norm_spec(read_json(path))


def parse_region(text: str) -> RegionSpec:
    """
    --region 인자 해석

    Args:
        text: "all", "inside:R", "outside:R" (R 은 'log2:x' 형식 허용) 또는 JSON 파일 경로

    Returns:
        RegionSpec
    """
    if text is None or text == "all":
        return ALL
    kind, sep, raw = text.partition(":")
    if sep and kind in ("inside", "outside"):
        radius = parse_number(raw)
        if radius.sign <= 0:
            raise InvalidInput(f"반지름은 양수여야 합니다: {raw}")
        return RegionSpec(kind=f"{kind}_ball", log2_radius=radius.log2)
    if os.path.exists(text):
        with validated("영역 파일"):
            return RegionSpec.model_validate(read_json(text))
    raise InvalidInput(f"영역 형식은 all, inside:R, outside:R 또는 JSON 파일이어야 합니다: {text!r}")
