import argparse
import logging
import sys
import traceback
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from dependencies import Settings, configure
from route import register_all
from utils.errors import HomTypeError

logger = logging.getLogger("homtype")

LOG_LEVELS = ["WARNING", "INFO", "DEBUG"]


class CliConfig(BaseModel):
    """파싱된 명령줄 설정"""
    subcommand: str
    action: Optional[str] = None
    out: Optional[str] = None
    format: Literal["json", "csv", "text"] = "json"
    seed: Optional[int] = None
    threads: Optional[int] = Field(None, ge=1)
    verbosity: int = Field(0, ge=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homtype",
        description="동차형 공간 위 Maz'ya–Shaposhnikova 범함수 계산 도구")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v: INFO, -vv: DEBUG")
    parser.add_argument("--threads", type=int, help="작업 스레드 수 (HOMTYPE_THREADS 가 우선)")
    parser.add_argument("--seed", type=int, help="난수 시드 (기본 20240917)")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    register_all(subparsers)
    return parser


def setup_logging(settings: Settings, verbosity: int) -> None:
    level = LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)] if verbosity else settings.log_level
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """
    명령줄 진입점

    Returns:
        0 성공, 1 계산 오류, 2 입력/사용법 오류, 3 시나리오 기대값 실패
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        config = CliConfig(subcommand=args.subcommand, action=getattr(args, "action", None),
                           out=getattr(args, "out", None), format=getattr(args, "format", "json"),
                           seed=args.seed, threads=args.threads, verbosity=args.verbose)
        settings = configure(Settings.from_env(threads=config.threads, seed=config.seed))
        setup_logging(settings, config.verbosity)
        logger.debug("설정: %s, threads=%d, seed=%d", config.model_dump(), settings.threads, settings.seed)
        return args.handler(args)
    except HomTypeError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: InvalidInput: {e.errors()[0]['msg']}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
