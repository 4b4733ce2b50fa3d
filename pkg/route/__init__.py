"""
CLI 하위 명령 모듈

각 모듈은 register(subparsers) 로 자기 하위 명령을 등록하고,
처리 함수는 args.handler 로 연결되어 종료 코드를 돌려줍니다.
"""

import argparse
import sys
from typing import Optional

import pandas as pd
from pydantic import BaseModel

from db import dumps, envelope, write_json
from db.report import frame_to_csv, kind_of, write_csv, write_report
from utils.errors import InvalidInput

__all__ = ["space", "check", "norm", "maximal", "ms", "scenario", "register_all", "emit"]


def add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="결과 파일 (.csv 면 CSV, 그 밖에는 JSON)")
    parser.add_argument("--format", choices=["json", "csv", "text"], default="json",
                        help="--out 이 없을 때 표준 출력 형식")


def emit(args, payload, frame: Optional[pd.DataFrame] = None, text: Optional[str] = None) -> None:
    """
    결과를 파일 또는 표준 출력으로 내보냅니다.

    보고서 모델은 스키마 봉투와 함께 저장되고, CSV 는 frame 이 있을 때만 가능합니다.
    """
    out = getattr(args, "out", None)
    fmt = getattr(args, "format", "json")
    if out:
        if out.lower().endswith(".csv"):
            if frame is None:
                raise InvalidInput(f"이 명령은 CSV 출력을 지원하지 않습니다: {out}")
            write_csv(out, frame)
        elif isinstance(payload, BaseModel):
            write_report(out, payload)
        else:
            write_json(out, payload)
        return
    if fmt == "csv" and frame is not None:
        sys.stdout.write(frame_to_csv(frame))
    elif fmt == "text" and text is not None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    elif isinstance(payload, BaseModel):
        sys.stdout.write(dumps(envelope(kind_of(payload), payload)))
    else:
        sys.stdout.write(dumps(payload))


def register_all(subparsers) -> None:
    from . import check, maximal, ms, norm, scenario, space
    for module in (space, check, norm, maximal, ms, scenario):
        module.register(subparsers)
