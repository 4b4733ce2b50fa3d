"""
측도 조건 검사 모듈

doubling, 약한 역 doubling(WRD), 약한 측도 밀도(WMD) 조건을 유한 반지름 창(window)
위의 비율 프로파일로 검사합니다. r → ∞ 의 liminf 대신 창 안의 최솟값으로 판정하므로
결과는 항상 "창 판정" 입니다.
"""

import logging
import math
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from utils.errors import EmptySubset, InvalidInput, WindowTooNarrow
from utils.log_scalar import LogScalar
from utils.space_core import AnySpace, FinitePointSpace, IntervalDomain1D, PointId

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
WRD_THRESHOLD = 1.0 + 1e-6
WMD_THRESHOLD = 1e-3
DOUBLING_THRESHOLD = 1.0
RADII_PER_DECADE = 32
MIN_CONCLUSIVE_RADII = 4
WINDOW_CAVEAT = "finite-window surrogate: the verdict approximates liminf over r → ∞ only on the window used"

Radius = Union[float, LogScalar]


class RadiusRatio(BaseModel):
    log2_radius: float
    ratio: float


class ConditionReport(BaseModel):
    condition: Literal["doubling", "wrd", "wmd"]
    ratios: List[RadiusRatio]
    window_inf: float
    threshold: float
    verdict: Literal["pass", "fail", "inconclusive"]
    parameters: Dict[str, Optional[Union[float, str, List[float]]]] = Field(default_factory=dict)
    caveat: str = WINDOW_CAVEAT

    @property
    def log_radii(self) -> np.ndarray:
        return np.array([r.log2_radius for r in self.ratios]) * LN2

    @property
    def ratio_values(self) -> np.ndarray:
        return np.array([r.ratio for r in self.ratios])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.ratios], columns=["log2_radius", "ratio"])


# --- 반지름 격자 ---

def _log_of(r: Radius) -> float:
    if isinstance(r, LogScalar):
        if r.sign <= 0:
            raise InvalidInput("반지름은 양수여야 합니다")
        return r.log_magnitude
    if not r > 0:
        raise InvalidInput(f"반지름은 양수여야 합니다: {r}")
    return math.log(r)


def _log_window(window: Tuple[Radius, Radius]) -> Tuple[float, float]:
    lo, hi = _log_of(window[0]), _log_of(window[1])
    if lo >= hi:
        raise WindowTooNarrow(f"r_lo ≥ r_hi: ({window[0]}, {window[1]})")
    return lo, hi


def log_grid(log_lo: float, log_hi: float, per_decade: int = RADII_PER_DECADE) -> np.ndarray:
    """로그 간격 격자 (양 끝 포함)"""
    n = max(2, int(math.ceil((log_hi - log_lo) / math.log(10.0) * per_decade)) + 1)
    return np.linspace(log_lo, log_hi, n)


def critical_grid(critical: np.ndarray, log_lo: float, log_hi: float) -> np.ndarray:
    """
    비율이 상수인 구간마다 로그 중점 하나

    critical 은 공의 원소가 바뀌는 ln 반지름들입니다. 창 경계도 구간 끝으로 씁니다.
    """
    c = np.unique(critical[np.isfinite(critical)])
    c = c[(c > log_lo) & (c < log_hi)]
    edges = np.concatenate([[log_lo], c, [log_hi]])
    return 0.5 * (edges[:-1] + edges[1:])


def _profile(space: AnySpace, center: PointId, log_radii: np.ndarray) -> np.ndarray:
    """ln μ(B(center, r)) 배열"""
    if isinstance(space, FinitePointSpace):
        return space.log_ball_profile(center, log_radii)
    c = float(center)
    with np.errstate(over="ignore"):
        radii = np.exp(log_radii)
    meas = np.array([space.ball_measure(c, r) for r in radii])
    with np.errstate(divide="ignore"):
        return np.log(meas)


def _default_center(space: AnySpace, base_point):
    if base_point is not None:
        return base_point
    return 0 if isinstance(space, FinitePointSpace) else 0.0


def _explicit(radii, log_radii) -> Optional[np.ndarray]:
    if log_radii is not None:
        return np.sort(np.asarray(log_radii, dtype=float))
    if radii is not None:
        return np.sort(np.array([_log_of(r) for r in radii]))
    return None


def _report(condition: str, log_radii: np.ndarray, ratios: np.ndarray, threshold: float,
            parameters: dict) -> ConditionReport:
    window_inf = float(np.min(ratios)) if len(ratios) else math.nan
    if len(ratios) < MIN_CONCLUSIVE_RADII:
        verdict = "inconclusive"
    else:
        verdict = "pass" if window_inf >= threshold else "fail"
    rows = [RadiusRatio(log2_radius=float(lr / LN2), ratio=float(q)) for lr, q in zip(log_radii, ratios)]
    logger.info("%s: 반지름 %d개, window_inf=%.6g, verdict=%s", condition, len(rows), window_inf, verdict)
    return ConditionReport(condition=condition, ratios=rows, window_inf=window_inf, threshold=threshold,
                           verdict=verdict, parameters=parameters)


def _center_label(space: AnySpace, center) -> str:
    if isinstance(space, FinitePointSpace):
        return space.labels[space.point_index(center)]
    return repr(float(center))


# --- 검사기 ---

def doubling_profile(space: AnySpace, x: PointId = None, radii: Optional[Sequence[Radius]] = None, *,
                     log_radii=None, window: Optional[Tuple[Radius, Radius]] = None,
                     threshold: float = DOUBLING_THRESHOLD) -> ConditionReport:
    """
    μ(B(x,2r))/μ(B(x,r)) 프로파일

    L_(μ) = 최대 비율, d = log₂ L_(μ). 반지름을 주지 않으면 유한 공간은 임계 격자
    (비율이 바뀌는 모든 반지름 사이의 중점)를 써서 정확한 최댓값을 얻습니다.
    """
    x = _default_center(space, x)
    grid = _explicit(radii, log_radii)
    if grid is None:
        if isinstance(space, FinitePointSpace):
            row = space.log_distances[space.point_index(x)]
            finite = row[np.isfinite(row)]
            if finite.size == 0:
                grid = np.array([0.0])
            else:
                lo, hi = (_log_window(window) if window is not None
                          else (float(finite.min()) - 2 * LN2, float(finite.max()) + LN2))
                grid = critical_grid(np.concatenate([finite, finite - LN2]), lo, hi)
        else:
            lo, hi = _log_window(window) if window is not None else (math.log(1e-3), math.log(1e3))
            grid = log_grid(lo, hi)
    ratios = np.exp(_profile(space, x, grid + LN2) - _profile(space, x, grid))
    big = float(ratios.max())
    params = {
        "L_mu": big,
        "upper_dimension": math.log2(big),
        "base_point": _center_label(space, x),
        "log2_window": [float(grid[0] / LN2), float(grid[-1] / LN2)],
    }
    return _report("doubling", grid, ratios, threshold, params)


def _check_window_scale(space: AnySpace, log_hi: float) -> None:
    if isinstance(space, FinitePointSpace):
        log_diam = float(np.max(space.log_distances))
        if log_hi > log_diam + 1e-12:
            raise InvalidInput("r_hi 가 공간의 지름보다 큽니다")


def check_wrd(space: AnySpace, lam: float, window: Tuple[Radius, Radius], base_point: PointId = None,
              threshold: float = WRD_THRESHOLD, radii: Optional[Sequence[Radius]] = None, *,
              log_radii=None, per_decade: int = RADII_PER_DECADE) -> ConditionReport:
    """μ(B(x₀,λr))/μ(B(x₀,r)) 의 창 최솟값이 threshold 이상이면 pass"""
    if not lam > 1:
        raise InvalidInput(f"λ > 1 이어야 합니다: {lam}")
    lo, hi = _log_window(window)
    _check_window_scale(space, hi)
    x0 = _default_center(space, base_point)
    log_lam = math.log(lam)
    grid = _explicit(radii, log_radii)
    if grid is None:
        if isinstance(space, FinitePointSpace):
            row = space.log_distances[space.point_index(x0)]
            grid = critical_grid(np.concatenate([row, row - log_lam]), lo, hi)
        else:
            grid = log_grid(lo, hi, per_decade)
    ratios = np.exp(_profile(space, x0, grid + log_lam) - _profile(space, x0, grid))
    params = {"lambda": lam, "base_point": _center_label(space, x0),
              "log2_window": [lo / LN2, hi / LN2]}
    return _report("wrd", grid, ratios, threshold, params)


def check_wmd(space: AnySpace, subset, base_point: PointId = None,
              window: Optional[Tuple[Radius, Radius]] = None, threshold: float = WMD_THRESHOLD,
              radii: Optional[Sequence[Radius]] = None, *, log_radii=None,
              per_decade: int = RADII_PER_DECADE) -> ConditionReport:
    """μ(B(x₀,r) ∩ Ω)/μ(B(x₀,r)) 의 창 최솟값이 threshold 이상이면 pass"""
    x0 = _default_center(space, base_point)
    grid = _explicit(radii, log_radii)
    if grid is None:
        if window is None:
            raise InvalidInput("반지름 창 또는 반지름 목록이 필요합니다")
        lo, hi = _log_window(window)
    else:
        lo, hi = float(grid[0]), float(grid[-1])

    if isinstance(space, FinitePointSpace):
        idx = sorted({space.point_index(p) for p in subset})
        if not idx:
            raise EmptySubset("부분집합이 비어 있습니다")
        row = space.log_distances[space.point_index(x0)]
        if grid is None:
            grid = critical_grid(row, lo, hi)
        order = np.argsort(row, kind="stable")
        in_omega = np.zeros(space.n_points, dtype=bool)
        in_omega[idx] = True
        d_sorted = row[order]
        cum_all = np.logaddexp.accumulate(space.log_masses[order])
        cum_omega = np.logaddexp.accumulate(np.where(in_omega[order], space.log_masses[order], -np.inf))
        counts = np.searchsorted(d_sorted, grid, side="left")
        ratios = np.exp(cum_omega[counts - 1] - cum_all[counts - 1])
    else:
        omega = subset if isinstance(subset, IntervalDomain1D) else IntervalDomain1D(intervals=list(subset),
                                                                                     whole_line=True)
        if omega.is_empty:
            raise EmptySubset("부분집합이 비어 있습니다")
        # Ω 중 주변 공간 밖의 부분은 세지 않음
        clipped = space.intersect(omega.intervals)
        if not clipped:
            raise EmptySubset("부분집합이 주변 공간과 겹치지 않습니다")
        if grid is None:
            grid = log_grid(lo, hi, per_decade)
        restricted = space.model_copy(update={"intervals": clipped, "whole_line": False})
        c = float(x0)
        ratios = np.array([restricted.measure_within(c - r, c + r) / space.ball_measure(c, r)
                           for r in np.exp(grid)])
    params = {"base_point": _center_label(space, x0), "log2_window": [lo / LN2, hi / LN2]}
    return _report("wmd", grid, ratios, threshold, params)


def wrd_base_point_sweep(space: FinitePointSpace, lambdas: Sequence[float], window: Tuple[Radius, Radius],
                         threshold: float = WRD_THRESHOLD, base_point: PointId = 0,
                         points: Optional[Sequence[PointId]] = None) -> Dict[str, Optional[float]]:
    """
    점마다 창 안에서 WRD 를 통과하는 가장 작은 λ' (없으면 None)

    points 를 주지 않으면 기준점에서 r_lo 보다 가까운 점들만 봅니다.
    """
    lo, _ = _log_window(window)
    if points is None:
        row = space.log_distances[space.point_index(base_point)]
        points = [int(i) for i in np.flatnonzero(row < lo)]
    out = {}
    for p in points:
        found = None
        for lam in sorted(lambdas):
            if check_wrd(space, lam, window, p, threshold).verdict == "pass":
                found = float(lam)
                break
        out[space.labels[space.point_index(p)]] = found
    return out


def upper_dimension_check(space: AnySpace, report: ConditionReport,
                          lambdas: Optional[Sequence[float]] = None) -> float:
    """
    max over (r, λ) 의 μ(B(x,λr)) / (L_(μ)·λ^d·μ(B(x,r)))

    L_(μ), d, 중심, 반지름은 doubling 보고서에서 가져옵니다. 1 이하이면 상위 차원 부등식 성립.
    """
    if report.condition != "doubling":
        raise InvalidInput("doubling 보고서가 필요합니다")
    lams = np.linspace(1.0, 8.0, 15) if lambdas is None else np.asarray(lambdas, dtype=float)
    big, d = float(report.parameters["L_mu"]), float(report.parameters["upper_dimension"])
    center = report.parameters["base_point"]
    if isinstance(space, IntervalDomain1D):
        center = float(center)
    grid = report.log_radii
    base = _profile(space, center, grid)
    worst = 0.0
    for lam in lams:
        grown = _profile(space, center, grid + math.log(lam))
        worst = max(worst, float(np.max(np.exp(grown - base) / (big * lam ** d))))
    return worst
