import logging

import pandas as pd

from db.function import load_function, load_weight
from db.space import load_space
from db.spec import load_norm_spec
from dependencies import get_settings
from route import add_output_args, emit
from utils.errors import SpecMismatch
from utils.log_scalar import parse_float
from utils.operators import maximal_function, maximal_operator_norm, muckenhoupt_constant
from utils.space_core import FinitePointSpace

logger = logging.getLogger(__name__)


def _finite(space) -> FinitePointSpace:
    if not isinstance(space, FinitePointSpace):
        raise SpecMismatch("최대함수 계산은 유한 공간에서만 지원합니다")
    return space


def handle_maximal(args) -> int:
    space = _finite(load_space(args.space))
    f = load_function(args.function, space)
    mf = maximal_function(space, f)
    payload = {"labels": list(space.labels), "values": f.tolist(), "maximal": mf.tolist()}
    if args.spec:
        est = maximal_operator_norm(space, load_norm_spec(args.spec), trials=args.trials, seed=get_settings().seed)
        payload["operator_norm"] = {"lower": est.lower, "upper": est.upper, "trials": est.trials}
    frame = pd.DataFrame({"point": space.labels, "f": f, "Mf": mf})
    emit(args, payload, frame=frame)
    return 0


def handle_apconst(args) -> int:
    space = _finite(load_space(args.space))
    weight = load_weight(args.weight, space)
    p = parse_float(args.p)
    value = muckenhoupt_constant(space, weight, p)
    emit(args, {"p": p, "constant": value}, text=f"{value:.17g}")
    return 0


def register(subparsers) -> None:
    sub = subparsers.add_parser("maximal", help="Hardy–Littlewood 최대함수")
    sub.add_argument("--space", required=True)
    sub.add_argument("--function", required=True)
    sub.add_argument("--spec", help="주면 ‖M‖ 아래/위 추정도 계산")
    sub.add_argument("--trials", type=int, default=64)
    add_output_args(sub)
    sub.set_defaults(handler=handle_maximal)

    sub = subparsers.add_parser("apconst", help="Muckenhoupt A_p 상수")
    sub.add_argument("--space", required=True)
    sub.add_argument("--weight", required=True, help="가중치 JSON (값 목록)")
    sub.add_argument("--p", default="1")
    add_output_args(sub)
    sub.set_defaults(handler=handle_apconst)
