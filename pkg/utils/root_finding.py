"""
단조 함수용 이분법

Luxemburg형 노름은 "modular(λ) ≤ 1 인 최소 λ" 이므로, 감소 함수에 대해
브래킷을 넓힌 뒤 로그 스케일로 이분합니다. 반환값은 항상 조건을 만족하는 쪽
(위쪽 끝점)입니다.
"""

import logging
import math
from typing import Callable

from utils.errors import NonconvergentBisection

logger = logging.getLogger(__name__)

BISECTION_RTOL = 1e-12
BISECTION_MAX_ITER = 200
BRACKET_MAX_STEPS = 2000


def bisect_decreasing(fn: Callable[[float], float], target: float, guess: float,
                      rtol: float = BISECTION_RTOL, max_iter: int = BISECTION_MAX_ITER) -> float:
    """
    fn(λ)가 λ에 대해 감소할 때 fn(λ) ≤ target 인 최소 λ (> 0)

    Args:
        fn: λ > 0 에서 비증가 함수
        target: 기준값
        guess: 초기 추정 (양수)
        rtol: 상대 구간 폭 종료 조건
        max_iter: 최대 이분 횟수

    Returns:
        float: 조건을 만족하는 위쪽 끝점
    """
    if not guess > 0 or not math.isfinite(guess):
        raise NonconvergentBisection(f"초기 추정이 올바르지 않습니다: {guess}")
    lo = hi = guess
    steps = 0
    while fn(hi) > target:
        lo, hi = hi, hi * 2.0
        steps += 1
        if steps > BRACKET_MAX_STEPS or math.isinf(hi):
            raise NonconvergentBisection("위쪽 브래킷을 찾지 못했습니다")
    if lo == hi:
        while fn(lo) <= target:
            hi, lo = lo, lo * 0.5
            steps += 1
            if steps > BRACKET_MAX_STEPS or lo == 0.0:
                raise NonconvergentBisection("아래쪽 브래킷을 찾지 못했습니다")
    logger.debug("브래킷 [%.6g, %.6g], 확장 %d회", lo, hi, steps)

    for it in range(max_iter):
        if hi - lo <= rtol * hi:
            logger.debug("이분법 수렴: %d회", it)
            return hi
        mid = math.sqrt(lo * hi)
        # 로그 중점이 끝점과 같아지면 산술 중점으로
        if not lo < mid < hi:
            mid = 0.5 * (lo + hi)
        if fn(mid) <= target:
            hi = mid
        else:
            lo = mid
    if hi - lo <= rtol * hi:
        return hi
    raise NonconvergentBisection(f"{max_iter}회 안에 수렴하지 않았습니다 (구간 [{lo:.6g}, {hi:.6g}])")
