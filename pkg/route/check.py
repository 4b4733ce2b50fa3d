import logging
from typing import List, Tuple

from db.function import load_subset
from db.space import load_space
from route import add_output_args, emit
from utils.conditions import (
    DOUBLING_THRESHOLD, WMD_THRESHOLD, WRD_THRESHOLD, check_wmd, check_wrd, doubling_profile,
)
from utils.errors import InvalidInput
from utils.log_scalar import LogScalar, parse_float, parse_number
from utils.rendering import render
from utils.space_core import FinitePointSpace

logger = logging.getLogger(__name__)


def split_numbers(text: str) -> List[str]:
    """'a:b' 를 나누되 'log2:x' 형식의 숫자는 한 덩어리로 유지"""
    tokens, out = text.split(":"), []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.lower().startswith("log") and i + 1 < len(tokens):
            out.append(f"{tok}:{tokens[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def parse_window(text: str) -> Tuple[LogScalar, LogScalar]:
    parts = split_numbers(text)
    if len(parts) != 2:
        raise InvalidInput(f"창 형식은 r_lo:r_hi 이어야 합니다: {text!r}")
    return parse_number(parts[0]), parse_number(parts[1])


def _point(space, raw):
    if raw is None:
        return None
    if isinstance(space, FinitePointSpace):
        # 라벨 또는 "#i" 인덱스
        return raw
    return parse_float(raw)


def _report(args, report) -> int:
    emit(args, report, frame=report.to_frame(), text=render("condition_report.jinja2", report=report))
    return 0


def handle_doubling(args) -> int:
    space = load_space(args.space)
    window = parse_window(args.window) if args.window else None
    threshold = DOUBLING_THRESHOLD if args.threshold is None else parse_float(args.threshold)
    return _report(args, doubling_profile(space, _point(space, args.base_point), window=window,
                                          threshold=threshold))


def handle_wrd(args) -> int:
    space = load_space(args.space)
    if not args.window:
        raise InvalidInput("wrd 검사에는 --window 가 필요합니다")
    threshold = WRD_THRESHOLD if args.threshold is None else parse_float(args.threshold)
    return _report(args, check_wrd(space, parse_float(args.lam), parse_window(args.window),
                                   _point(space, args.base_point), threshold))


def handle_wmd(args) -> int:
    space = load_space(args.space)
    if not args.subset:
        raise InvalidInput("wmd 검사에는 --subset 이 필요합니다")
    subset = load_subset(args.subset, space)
    threshold = WMD_THRESHOLD if args.threshold is None else parse_float(args.threshold)
    window = parse_window(args.window) if args.window else None
    return _report(args, check_wmd(space, subset, _point(space, args.base_point), window, threshold))


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="doubling / WRD / WMD 조건 검사")
    actions = parser.add_subparsers(dest="action", required=True)
    for name, handler in (("doubling", handle_doubling), ("wrd", handle_wrd), ("wmd", handle_wmd)):
        sub = actions.add_parser(name)
        sub.add_argument("--space", required=True)
        sub.add_argument("--subset", help="WMD 부분집합 JSON")
        sub.add_argument("--lambda", dest="lam", default="2", help="WRD 팽창 배율 λ > 1")
        sub.add_argument("--window", help="반지름 창 r_lo:r_hi ('log2:x' 허용)")
        sub.add_argument("--threshold")
        sub.add_argument("--base-point", help="기준점 (인덱스, 라벨 또는 좌표)")
        add_output_args(sub)
        sub.set_defaults(handler=handler)
