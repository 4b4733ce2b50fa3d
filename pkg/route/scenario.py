import logging

from route import add_output_args, emit
from utils.errors import InvalidInput
from utils.scenarios import list_scenarios, run_scenario

logger = logging.getLogger(__name__)

# 기대값 실패 종료 코드
EXPECTATION_FAILED = 3


def parse_overrides(items):
    overrides = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InvalidInput(f"--set 형식은 key=value 여야 합니다: {item!r}")
        overrides[key.strip()] = value.strip()
    return overrides


def handle_list(args) -> int:
    entries = list_scenarios()
    text = "\n".join(f"{e['name']}: {e['anchor']}" for e in entries)
    emit(args, entries, text=text)
    return 0


def handle_run(args) -> int:
    report = run_scenario(args.name, parse_overrides(args.set))
    emit(args, report, text=report.render_text())
    if not report.passed:
        logger.warning("시나리오 %s 기대값 실패", args.name)
        return EXPECTATION_FAILED
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("scenario", help="재현 시나리오")
    actions = parser.add_subparsers(dest="action", required=True)
    sub = actions.add_parser("list")
    add_output_args(sub)
    sub.set_defaults(handler=handle_list)
    sub = actions.add_parser("run")
    sub.add_argument("name")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE", help="매개변수 덮어쓰기 (반복 가능)")
    add_output_args(sub)
    sub.set_defaults(handler=handle_run)
