import logging

from db.function import load_function
from db.space import load_space
from db.spec import load_norm_spec, parse_region
from route import add_output_args, emit
from utils.log_scalar import parse_float
from utils.ms_functional import DEFAULT_S_GRID, ms_scan, ms_value, parse_grid
from utils.rendering import render

logger = logging.getLogger(__name__)


def _inputs(args):
    space = load_space(args.space)
    return (space, load_function(args.function, space), parse_float(args.q),
            load_norm_spec(args.spec), parse_region(args.region))


def handle_eval(args) -> int:
    space, f, q, spec, region = _inputs(args)
    s = parse_float(args.s)
    value = ms_value(space, f, q, spec, s, region)
    emit(args, {"q": q, "s": s, "region": region.model_dump(mode="json"), "F": value}, text=f"{value:.17g}")
    return 0


def handle_scan(args) -> int:
    space, f, q, spec, region = _inputs(args)
    grid = parse_grid(args.grid) if args.grid else list(DEFAULT_S_GRID)
    result = ms_scan(space, f, q, spec, grid, region)
    frame = result.to_frame()
    emit(args, result, frame=frame,
         text=render("scan_report.jinja2", scan=result, rows=frame.to_dict(orient="records")))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("ms", help="MS 범함수 계산과 s 스캔")
    actions = parser.add_subparsers(dest="action", required=True)
    for name, handler in (("eval", handle_eval), ("scan", handle_scan)):
        sub = actions.add_parser(name)
        sub.add_argument("--space", required=True)
        sub.add_argument("--function", required=True)
        sub.add_argument("--q", default="1")
        sub.add_argument("--spec", required=True)
        sub.add_argument("--region", default="all", help="all, inside:R, outside:R 또는 JSON 파일")
        if name == "eval":
            sub.add_argument("--s", required=True)
        else:
            sub.add_argument("--grid", help="hi:lo:n (기본 1e-1:1e-5:9)")
        add_output_args(sub)
        sub.set_defaults(handler=handler)
