"""
Maz'ya–Shaposhnikova 범함수 모듈

G_s(f)(x) = ∫ |f(x) − f(y)|^q / (U(x,y) ρ(x,y)^{sq}) dμ(y) 와
F(s) = s^{1/q}‖G_s^{1/q}‖_Y, 꼬리 질량, s 격자 스캔과 추세 분류를 계산합니다.
유한 공간은 로그 영역에서 합하고, 직선 위 계단함수는 utils.ms_line 의 닫힌 형태를 씁니다.
"""

import logging
import math
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator
from scipy.special import logsumexp

from dependencies import parallel_map
from utils.errors import DiagonalOnly, EmptySubset, InvalidInput, LengthMismatch, SpecMismatch
from utils.function_spaces import evaluate_norm
from utils.log_scalar import exp_checked, exp_checked_array
from utils.ms_line import check_s, kernel_1d, ms_value_1d, tail_mass_1d
from utils.norm_specs import NormSpec
from utils.quadrature import DEFAULT_RULE, QuadratureRule
from utils.space_core import (
    LN2, AnySpace, FinitePointSpace, IntervalDomain1D, PointId, StepFunction1D,
    diameter, sample_1d,
)

logger = logging.getLogger(__name__)

DEFAULT_S_GRID = tuple(float(s) for s in np.logspace(-1, -5, 9))
MIN_GRID_POINTS = 4
DECREASE_FACTOR = 0.8
INCREASE_FACTOR = 1.2
VANISH_FRACTION = 0.05
BOUNDED_WIDTH = 10.0
EXTRAPOLATION_SPREAD = 0.05
# 이중지수 급수 기준값에서 잘린 뒤 더하는 항 수
ORACLE_TAIL_TERMS = 64

Trend = Literal["decreasing_to_zero", "bounded_bracket", "increasing", "inconclusive"]
FunctionLike = Union[Sequence[float], np.ndarray, StepFunction1D]


class RegionSpec(BaseModel):
    """
    y 적분 영역 제한

    inside_ball: ρ(x,y) < R, outside_ball: ρ(x,y) ≥ R, subset: y ∈ Ω (점 목록 또는 구간 목록)
    """
    kind: Literal["all", "inside_ball", "outside_ball", "subset"] = "all"
    radius: Optional[float] = Field(None, gt=0)
    log2_radius: Optional[float] = None
    points: Optional[List[Union[int, str, float]]] = None
    intervals: Optional[List[Tuple[float, float]]] = None

    @model_validator(mode="after")
    def _check(self):
        if self.kind in ("inside_ball", "outside_ball"):
            if (self.radius is None) == (self.log2_radius is None):
                raise ValueError("radius 와 log2_radius 중 정확히 하나가 필요합니다")
        if self.kind == "subset" and not (self.points or self.intervals):
            raise ValueError("subset 영역은 비어 있지 않은 points 또는 intervals 가 필요합니다")
        return self

    @property
    def log_radius(self) -> float:
        if self.radius is not None:
            return math.log(self.radius)
        return self.log2_radius * LN2

    @property
    def radius_value(self) -> float:
        if self.radius is not None:
            return self.radius
        return math.inf if self.log2_radius > 1000 else 2.0 ** self.log2_radius

    def intervals_within(self, domain: IntervalDomain1D) -> List[Tuple[float, float]]:
        """부분집합 구간과 Ω 의 교집합"""
        if not self.intervals:
            raise SpecMismatch("직선 위 subset 영역은 intervals 로 지정해야 합니다")
        out = []
        for lo, hi in domain.intervals:
            for a, b in self.intervals:
                a2, b2 = max(a, lo), min(b, hi)
                if a2 < b2:
                    out.append((a2, b2))
        if not out:
            raise EmptySubset("영역이 Ω 와 겹치지 않습니다")
        return sorted(out)

    def column_mask(self, space: FinitePointSpace) -> np.ndarray:
        """유한 공간에서 subset 에 속하는 점 표시"""
        mask = np.zeros(space.n_points, dtype=bool)
        for p in self.points or []:
            mask[space.point_index(p)] = True
        if self.intervals:
            if space.coordinates is None:
                raise SpecMismatch("구간 subset 은 좌표가 있는 공간에서만 쓸 수 있습니다")
            for a, b in self.intervals:
                mask |= (space.coordinates > a) & (space.coordinates < b)
        if not mask.any():
            raise EmptySubset("영역에 속하는 점이 없습니다")
        return mask


ALL = RegionSpec()


def _check_q(q: float) -> None:
    if not q > 0:
        raise InvalidInput(f"q > 0 이어야 합니다: {q}")


def _finite_values(space: FinitePointSpace, f) -> np.ndarray:
    values = np.asarray(f, dtype=float)
    if values.shape != (space.n_points,):
        raise LengthMismatch(f"값 {values.size}개, 점 {space.n_points}개")
    return values


def _require_step(space: IntervalDomain1D, f) -> StepFunction1D:
    if not isinstance(f, StepFunction1D):
        raise SpecMismatch("구간 공간 위의 함수는 StepFunction1D 여야 합니다")
    return f


# --- 커널 ---

def _log_kernel_rows(space: FinitePointSpace, values: np.ndarray, q: float, s: float,
                     region: RegionSpec, rows: Optional[np.ndarray] = None) -> np.ndarray:
    """행 x, 열 y 의 log(|f(x)−f(y)|^q μ(y) / (U ρ^{sq})), 제외 항은 −inf"""
    idx = np.arange(space.n_points) if rows is None else rows
    log_d = space.log_distances[idx]
    with np.errstate(divide="ignore"):
        log_diff = q * np.log(np.abs(values[idx, None] - values[None, :]))
    log_u = space.log_u[idx]
    diag = idx[:, None] == np.arange(space.n_points)[None, :]
    terms = np.where(diag | np.isneginf(log_diff), -np.inf,
                     log_diff + space.log_masses[None, :] - np.where(diag, 0.0, log_u)
                     - s * q * np.where(diag, 0.0, log_d))
    if region.kind == "inside_ball":
        terms = np.where(log_d < region.log_radius, terms, -np.inf)
    elif region.kind == "outside_ball":
        terms = np.where(log_d >= region.log_radius, terms, -np.inf)
    elif region.kind == "subset":
        terms = np.where(region.column_mask(space)[None, :], terms, -np.inf)
    return terms


def gagliardo_profile(space: AnySpace, f: FunctionLike, q: float, s: float,
                      region: RegionSpec = ALL, nodes=None) -> np.ndarray:
    """
    모든 점에서의 G_s(f)

    Args:
        space: 유한 공간 또는 구간 공간 (구간 공간이면 nodes 위치에서 계산)
        f: 유한 공간이면 점별 값, 구간 공간이면 StepFunction1D
        nodes: 구간 공간에서 계산할 위치
    """
    check_s(s)
    _check_q(q)
    if isinstance(space, IntervalDomain1D):
        if nodes is None:
            raise InvalidInput("구간 공간의 프로파일은 nodes 가 필요합니다")
        return kernel_1d(space, _require_step(space, f), q, s, nodes, region)
    if space.n_points == 1:
        raise DiagonalOnly("점이 하나뿐이면 대각 밖의 항이 없습니다")
    values = _finite_values(space, f)
    log_g = logsumexp(_log_kernel_rows(space, values, q, s, region), axis=1)
    return exp_checked_array(log_g, "G_s")


def gagliardo_kernel(space: AnySpace, f: FunctionLike, q: float, s: float, x: PointId,
                     region: RegionSpec = ALL) -> float:
    """G_s(f)(x)"""
    check_s(s)
    _check_q(q)
    if isinstance(space, IntervalDomain1D):
        return float(kernel_1d(space, _require_step(space, f), q, s, [float(x)], region)[0])
    if space.n_points == 1:
        raise DiagonalOnly("점이 하나뿐이면 대각 밖의 항이 없습니다")
    values = _finite_values(space, f)
    row = np.array([space.point_index(x)])
    return exp_checked(float(logsumexp(_log_kernel_rows(space, values, q, s, region, row)[0])), "G_s")


# --- 범함수 ---

def ms_value(space: AnySpace, f: FunctionLike, q: float, spec: NormSpec, s: float,
             region: RegionSpec = ALL, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """F(s) = s^{1/q}‖G_s^{1/q}‖_Y"""
    check_s(s)
    _check_q(q)
    if isinstance(space, IntervalDomain1D):
        return ms_value_1d(space, _require_step(space, f), q, spec, s, region, rule)
    g = gagliardo_profile(space, f, q, s, region)
    return s ** (1.0 / q) * evaluate_norm(space, g ** (1.0 / q), spec)


def reference_norm(space: AnySpace, f: FunctionLike, spec: NormSpec,
                   rule: QuadratureRule = DEFAULT_RULE) -> float:
    """‖f‖_Y (Quotient 명세면 몫 노름)"""
    if isinstance(space, IntervalDomain1D):
        nodes, sample = sample_1d(space, _require_step(space, f), rule)
        return evaluate_norm(nodes, sample.values, spec)
    return evaluate_norm(space, _finite_values(space, f), spec)


def sobolev_seminorm(space: FinitePointSpace, f, q: float, s0: float, spec: NormSpec,
                     region: RegionSpec = ALL) -> float:
    """‖f‖_{Ẇ^{s0,q}_Y} = ‖G_{s0}^{1/q}‖_Y"""
    g = gagliardo_profile(space, f, q, s0, region)
    return evaluate_norm(space, g ** (1.0 / q), spec)


def thm1_bound(space: FinitePointSpace, f, q: float, s: float, s0: float, spec: NormSpec,
               seminorm: Optional[float] = None) -> float:
    """
    유계 공간의 상한 s^{1/q}·diam^{s0−s}·‖f‖_{Ẇ^{s0,q}_Y} (s < s0)

    ρ^{−sq} = ρ^{−s0·q}·ρ^{(s0−s)q} ≤ ρ^{−s0·q}·diam^{(s0−s)q} 에서 나옵니다.
    """
    check_s(s)
    check_s(s0)
    if not s < s0:
        raise InvalidInput(f"s < s0 이어야 합니다: s={s}, s0={s0}")
    if seminorm is None:
        seminorm = sobolev_seminorm(space, f, q, s0, spec)
    if seminorm == 0.0:
        return 0.0
    log_bound = (math.log(s) / q + (s0 - s) * diameter(space).log_magnitude + math.log(seminorm))
    return exp_checked(log_bound, "Thm1 상한")


# --- 꼬리 질량 ---

def tail_mass(space: AnySpace, x: PointId, q: float, s: float) -> float:
    """
    s·∫_{B(x, s^{−1/q})^c} dμ(y) / (U(x,y) ρ(x,y)^{sq})

    기하 공간은 잘린 항들의 해석적 나머지를 더합니다.
    """
    check_s(s)
    _check_q(q)
    if isinstance(space, IntervalDomain1D):
        return tail_mass_1d(space, float(x), q, s)
    i = space.point_index(x)
    log_r = -math.log(s) / q
    log_d = space.log_distances[i]
    keep = (log_d >= log_r) & (np.arange(space.n_points) != i)
    total = 0.0
    if keep.any():
        terms = space.log_masses[keep] - space.log_u[i, keep] - s * q * log_d[keep]
        total = exp_checked(math.log(s) + float(logsumexp(terms)), "꼬리 질량")
    if space.tail is not None:
        k_from = max(space.tail.k_last + 1, math.ceil(log_r / math.log(space.tail.base)))
        remainder = s * space.tail.remainder(s, q, k_from)
        logger.debug("tail_mass: 해석적 나머지 %.3g (k ≥ %d)", remainder, k_from)
        total += remainder
    return total


def dexp_series_oracle(s: float, k_max: int = 60, q: float = 1.0) -> float:
    """
    이중지수 공간의 점 4 에서 1_{4} 의 커널 급수 Σ_{j=2}^{k_max} 2^j / ((2^j−2)(2^{2^j}−4)^{sq})

    공간 구성과 무관한 독립 계산이며, k_max 뒤로 64항을 더 더해 잘림을 보정합니다.
    """
    check_s(s)
    j = np.arange(2, k_max + 1 + ORACLE_TAIL_TERMS, dtype=float)
    log_dist = (2.0 ** j) * LN2 + np.log1p(-4.0 * np.exp(-(2.0 ** j) * LN2))
    log_terms = j * LN2 - np.log(2.0 ** j - 2.0) - s * q * log_dist
    return exp_checked(float(logsumexp(log_terms)), "급수")


# --- 스캔 ---

class Extrapolation(BaseModel):
    """마지막 세 값의 Aitken 외삽"""
    value: Optional[float] = None
    spread: Optional[float] = None
    reliable: bool = False


class MSScanResult(BaseModel):
    q: float
    spec: NormSpec
    grid: List[float]
    values: List[float]
    reference_norm: float
    ratio_bracket: Tuple[float, float]
    trend: Trend
    extrapolation: Extrapolation = Field(default_factory=Extrapolation)

    @property
    def tail_start(self) -> int:
        """작은 s 쪽 절반의 시작 위치"""
        return len(self.grid) - math.ceil(len(self.grid) / 2)

    def ratios(self) -> np.ndarray:
        values = np.asarray(self.values)
        if self.reference_norm == 0.0:
            return np.full(len(values), math.nan)
        return values / self.reference_norm

    def bracket_contains(self, target: float, tol: float = 0.0) -> bool:
        lo, hi = self.ratio_bracket
        return lo * (1.0 - tol) <= target <= hi * (1.0 + tol)

    def to_frame(self) -> pd.DataFrame:
        """s, F, ratio, 추세 플래그 표"""
        n = len(self.grid)
        return pd.DataFrame({
            "s": self.grid,
            "F": self.values,
            "ratio": self.ratios(),
            "in_bracket": [i >= self.tail_start for i in range(n)],
            "trend": [self.trend] * n,
        })


def classify_trend(values: Sequence[float], bracket: Tuple[float, float]) -> Trend:
    v = np.asarray(values, dtype=float)
    if len(v) < MIN_GRID_POINTS or not np.all(np.isfinite(v)):
        return "inconclusive"
    last = v[-4:]
    if np.all(last[1:] <= DECREASE_FACTOR * last[:-1]) and v[-1] < VANISH_FRACTION * v[0]:
        return "decreasing_to_zero"
    if np.all(last[1:] >= INCREASE_FACTOR * last[:-1]) and last[0] > 0:
        return "increasing"
    lo, hi = bracket
    if lo > 0 and math.isfinite(hi) and hi / lo <= BOUNDED_WIDTH:
        return "bounded_bracket"
    return "inconclusive"


def aitken(values: Sequence[float]) -> Extrapolation:
    """마지막 세 값의 Aitken Δ² 외삽, 상대 퍼짐이 5% 미만일 때만 reliable"""
    if len(values) < 3:
        return Extrapolation()
    x0, x1, x2 = (float(v) for v in values[-3:])
    denom = (x2 - x1) - (x1 - x0)
    if denom == 0.0:
        if x2 == x1:
            return Extrapolation(value=x2, spread=0.0, reliable=True)
        return Extrapolation()
    limit = x2 - (x2 - x1) ** 2 / denom
    if not math.isfinite(limit):
        return Extrapolation()
    scale = max(abs(limit), abs(x2))
    spread = abs(limit - x2) / scale if scale > 0 else 0.0
    return Extrapolation(value=limit, spread=spread, reliable=spread < EXTRAPOLATION_SPREAD)


def check_grid(s_grid: Sequence[float]) -> List[float]:
    grid = [float(s) for s in s_grid]
    if len(grid) < MIN_GRID_POINTS:
        raise InvalidInput(f"s 격자는 {MIN_GRID_POINTS}점 이상이어야 합니다: {len(grid)}")
    for s in grid:
        check_s(s)
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise InvalidInput("s 격자는 순감소해야 합니다")
    return grid


def parse_grid(text: str) -> List[float]:
    """'1e-1:1e-5:9' 형식의 로그 균등 격자"""
    try:
        hi, lo, n = text.split(":")
        return [float(s) for s in np.logspace(math.log10(float(hi)), math.log10(float(lo)), int(n))]
    except ValueError:
        raise InvalidInput(f"격자 형식은 hi:lo:n 이어야 합니다: {text!r}")


def ms_scan(space: AnySpace, f: FunctionLike, q: float, spec: NormSpec,
            s_grid: Sequence[float] = DEFAULT_S_GRID, region: RegionSpec = ALL,
            rule: QuadratureRule = DEFAULT_RULE) -> MSScanResult:
    """s 격자 위의 F(s), 기준 노름 대비 비율 구간과 추세"""
    grid = check_grid(s_grid)
    _check_q(q)

    def one(s: float) -> float:
        value = ms_value(space, f, q, spec, s, region, rule)
        logger.info("ms_scan: s=%.3g F=%.10g", s, value)
        return value

    values = parallel_map(one, grid)
    ref = reference_norm(space, f, spec, rule)
    tail = values[len(grid) - math.ceil(len(grid) / 2):]
    # 기준 노름이 0 이면 비율이 정의되지 않으므로 (0, 0) 으로 두고 추세만 봅니다
    bracket = (min(tail) / ref, max(tail) / ref) if ref > 0 else (0.0, 0.0)
    trend = classify_trend(values, bracket)
    result = MSScanResult(q=q, spec=spec, grid=grid, values=values, reference_norm=ref,
                          ratio_bracket=bracket, trend=trend, extrapolation=aitken(values))
    logger.info("ms_scan: 추세=%s 비율 구간=[%.6g, %.6g]", trend, *bracket)
    return result
