import logging

from db.space import load_space
from route import add_output_args, emit
from utils.rendering import render
from utils.space_core import space_info

logger = logging.getLogger(__name__)


def handle_validate(args) -> int:
    space = load_space(args.space)
    info = space_info(space)
    emit(args, {"valid": True, **info}, text=render("space_info.jinja2", info={"valid": True, **info}))
    return 0


def handle_info(args) -> int:
    info = space_info(load_space(args.space))
    emit(args, info, text=render("space_info.jinja2", info=info))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("space", help="공간 파일 검증과 요약")
    actions = parser.add_subparsers(dest="action", required=True)
    for name, handler, help_text in (("validate", handle_validate, "공간 파일 검증"),
                                     ("info", handle_info, "공간 요약")):
        sub = actions.add_parser(name, help=help_text)
        sub.add_argument("--space", required=True, help="공간 정의 JSON")
        add_output_args(sub)
        sub.set_defaults(handler=handler)
