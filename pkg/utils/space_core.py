"""
준거리 측도 공간 모듈

유한 점 공간(FinitePointSpace)과 직선 위 구간 합집합(IntervalDomain1D)을 표현하고,
열린 공 측도, U(x,y), 적분, 지름, Hölder 반노름, 1차원 이산화를 제공합니다.
거리와 질량은 모두 자연로그로 저장되어 2^{2^k} 규모에서도 넘치지 않습니다.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from utils.errors import (
    AsymmetricDistance, EmptyDomain, InvalidInput, LengthMismatch,
    NonpositiveMass, QuasiTriangleViolation, SamePoint, UnknownPoint,
    ZeroDistanceDistinctPoints,
)
from utils.log_scalar import (
    LogScalar, exp_checked, log_sub_array, log_sum,
)
from utils.quadrature import DEFAULT_RULE, QuadratureRule, graded_rule

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
# 전수 삼중 검사 상한, 그 이상은 표본 검사
FULL_TRIPLE_LIMIT = 512
TRIPLE_SAMPLES = 200_000

PointId = Union[int, str, float]


@dataclass(frozen=True)
class GeometricTail:
    """
    잘린 기하 공간 {b^k}의 k > k_last 연장 정보

    tail_mass 계산 시 잘린 항들의 해석적 나머지를 더하는 데 사용합니다.
    """
    base: float
    mass_exponent: float
    k_last: int

    def remainder(self, s: float, q: float, k_from: Optional[int] = None) -> float:
        """Σ_{k ≥ k_from} (b^m − 1)·b^{−k·s·q} (기본 k_from = k_last + 1)"""
        k0 = self.k_last + 1 if k_from is None else k_from
        lb = math.log(self.base)
        factor = math.expm1(self.mass_exponent * lb)
        decay = s * q * lb
        return factor * math.exp(-k0 * decay) / -math.expm1(-decay)


class FinitePointSpace:
    """
    유한 준거리 측도 공간 (생성 후 불변)

    log_distances[i, j] = ln ρ(x_i, x_j) (대각은 -inf), log_masses[i] = ln μ({x_i}).
    coordinates가 주어지면 1차원 유클리드 노드로 보고 거리표는 필요할 때 계산합니다.
    """

    def __init__(self, log_masses: np.ndarray, log_distances: Optional[np.ndarray] = None, *,
                 k0: float = 1.0, labels: Optional[Sequence[str]] = None,
                 coordinates: Optional[np.ndarray] = None,
                 tail: Optional[GeometricTail] = None, infinite_measure: bool = False,
                 name: str = "finite"):
        self.log_masses = np.asarray(log_masses, dtype=float)
        self.log_masses.setflags(write=False)
        if log_distances is None and coordinates is None:
            raise InvalidInput("거리표 또는 좌표 중 하나는 필요합니다")
        self.coordinates = None if coordinates is None else np.asarray(coordinates, dtype=float)
        if log_distances is not None:
            arr = np.asarray(log_distances, dtype=float)
            arr.setflags(write=False)
            self.__dict__["log_distances"] = arr
        self.k0 = float(k0)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(len(self.log_masses))]
        self.tail = tail
        self.infinite_measure = infinite_measure
        self.name = name
        self._label_index = {label: i for i, label in enumerate(self.labels)}

    @property
    def n_points(self) -> int:
        return len(self.log_masses)

    @cached_property
    def log_distances(self) -> np.ndarray:
        c = self.coordinates
        with np.errstate(divide="ignore"):
            arr = np.log(np.abs(c[:, None] - c[None, :]))
        arr.setflags(write=False)
        return arr

    def distance(self, x: PointId, y: PointId) -> LogScalar:
        return LogScalar.from_log(self.log_distances[self.point_index(x), self.point_index(y)])

    def mass(self, x: PointId) -> LogScalar:
        return LogScalar.from_log(self.log_masses[self.point_index(x)])

    def point_index(self, point: PointId) -> int:
        """
        점 식별자를 인덱스로 변환

        int는 인덱스, str은 라벨("#3"은 인덱스 3), float은 좌표로 해석합니다.
        """
        if isinstance(point, (bool, np.bool_)):
            raise UnknownPoint(f"점 식별자가 올바르지 않습니다: {point!r}")
        if isinstance(point, (int, np.integer)):
            if 0 <= point < self.n_points:
                return int(point)
            raise UnknownPoint(f"인덱스 {point} 는 범위 [0, {self.n_points}) 밖입니다")
        if isinstance(point, str):
            if point in self._label_index:
                return self._label_index[point]
            if point.startswith("#") and point[1:].isdigit():
                return self.point_index(int(point[1:]))
            raise UnknownPoint(f"라벨 '{point}' 인 점이 없습니다")
        if isinstance(point, (float, np.floating)) and self.coordinates is not None:
            hits = np.flatnonzero(self.coordinates == point)
            if hits.size:
                return int(hits[0])
        raise UnknownPoint(f"점 {point!r} 을(를) 찾을 수 없습니다")

    # --- 공 측도 ---

    def log_ball_measure(self, center: PointId, log_radius: float) -> float:
        """ln μ(B(x, r)), 열린 공"""
        i = self.point_index(center)
        inside = self.log_distances[i] < log_radius
        return log_sum(self.log_masses[inside])

    def log_ball_profile(self, center: PointId, log_radii: np.ndarray) -> np.ndarray:
        """여러 반지름에 대한 ln μ(B(x, r)) (정렬 + 누적 log-sum-exp)"""
        i = self.point_index(center)
        order = np.argsort(self.log_distances[i], kind="stable")
        d_sorted = self.log_distances[i][order]
        cum = np.logaddexp.accumulate(self.log_masses[order])
        counts = np.searchsorted(d_sorted, np.asarray(log_radii, dtype=float), side="left")
        out = np.full(len(counts), -np.inf)
        pos = counts > 0
        out[pos] = cum[counts[pos] - 1]
        return out

    def ball_members(self, center: PointId, log_radius: float) -> np.ndarray:
        i = self.point_index(center)
        return np.flatnonzero(self.log_distances[i] < log_radius)

    @cached_property
    def log_center_measures(self) -> np.ndarray:
        """V[x, y] = ln μ(B(x, ρ(x, y)))"""
        n = self.n_points
        out = np.empty((n, n))
        for i in range(n):
            order = np.argsort(self.log_distances[i], kind="stable")
            d_sorted = self.log_distances[i][order]
            cum = np.logaddexp.accumulate(self.log_masses[order])
            counts = np.searchsorted(d_sorted, self.log_distances[i], side="left")
            # 대각 (거리 -inf)은 빈 공
            row = np.full(n, -np.inf)
            pos = counts > 0
            row[pos] = cum[counts[pos] - 1]
            out[i] = row
        out.setflags(write=False)
        return out

    @cached_property
    def log_u(self) -> np.ndarray:
        """ln U(x, y), 대각은 -inf"""
        v = self.log_center_measures
        u = np.minimum(v, v.T)
        np.fill_diagonal(u, -np.inf)
        u.setflags(write=False)
        return u

    @property
    def log_total_mass(self) -> float:
        return log_sum(self.log_masses)

    def __repr__(self) -> str:
        return f"FinitePointSpace(name={self.name!r}, n_points={self.n_points}, k0={self.k0:.6g})"


class IntervalDomain1D(BaseModel):
    """
    직선 위 서로소 열린 구간들의 합집합

    whole_line이면 주변 공간은 ℝ 전체이고, 아니면 Ω 자신이 주변 공간입니다.
    density_exponent α 는 측도 |x|^α dx (α = 0 이 Lebesgue).
    """
    intervals: List[Tuple[float, float]] = Field(default_factory=list)
    whole_line: bool = False
    density_exponent: float = Field(0.0, gt=-1.0)

    @field_validator("intervals")
    @classmethod
    def _check_intervals(cls, v):
        for a, b in v:
            if math.isnan(a) or math.isnan(b) or not a < b:
                raise ValueError(f"구간 ({a}, {b}) 는 a < b 를 만족해야 합니다")
        for (_, b0), (a1, _) in zip(v, v[1:]):
            if a1 < b0:
                raise ValueError("구간은 정렬되어 있고 서로소여야 합니다")
        return v

    @model_validator(mode="after")
    def _check_bounded(self):
        if not self.whole_line:
            for a, b in self.intervals:
                if math.isinf(a) or math.isinf(b):
                    raise ValueError("whole_line이 아니면 무한 구간을 쓸 수 없습니다")
        return self

    @classmethod
    def real_line(cls) -> "IntervalDomain1D":
        return cls(intervals=[(-math.inf, math.inf)], whole_line=True)

    @property
    def is_empty(self) -> bool:
        return len(self.intervals) == 0

    @property
    def k0(self) -> float:
        return 1.0

    def _antiderivative(self, x):
        alpha = self.density_exponent
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            return np.sign(x) * np.abs(x) ** (alpha + 1.0) / (alpha + 1.0)

    def segment_measure(self, a: float, b: float) -> float:
        """측도 |x|^α dx 에 대한 (a, b)의 측도"""
        if b <= a:
            return 0.0
        if self.density_exponent == 0.0:
            return b - a
        return float(self._antiderivative(b) - self._antiderivative(a))

    def measure_within(self, a: float, b: float) -> float:
        """μ((a, b) ∩ Ω)"""
        total = 0.0
        for lo, hi in self.intervals:
            total += self.segment_measure(max(a, lo), min(b, hi))
        return total

    @property
    def measure(self) -> float:
        return sum(self.segment_measure(a, b) for a, b in self.intervals)

    def intersect(self, intervals: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
        """self 의 구간들과 주어진 구간들의 교집합 (빈 조각 제외, 정렬됨)"""
        out = []
        for a, b in self.intervals:
            for c, d in intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return sorted(out)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        hit = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            hit |= (x > a) & (x < b)
        return hit

    def ball_measure(self, center: float, radius: float) -> float:
        """열린 공 (c−r, c+r)의 측도; whole_line이면 ℝ, 아니면 Ω 와의 교집합"""
        a, b = center - radius, center + radius
        if self.whole_line:
            return self.segment_measure(a, b)
        return self.measure_within(a, b)

    @property
    def diameter(self) -> float:
        if self.whole_line:
            return math.inf
        if self.is_empty:
            return 0.0
        return self.intervals[-1][1] - self.intervals[0][0]


class StepFunction1D(BaseModel):
    """
    구간별 상수 함수

    values[i]는 (breakpoints[i-1], breakpoints[i]) 위의 값이며 양 끝 값은 0이어야 합니다.
    values가 breakpoints보다 하나 적으면 내부 조각 값으로 보고 양 끝에 0을 채웁니다.
    """
    breakpoints: List[float]
    values: List[float]

    @model_validator(mode="before")
    @classmethod
    def _pad_outer(cls, data):
        if isinstance(data, dict):
            bp, vals = data.get("breakpoints", []), data.get("values", [])
            if len(bp) >= 1 and len(vals) == len(bp) - 1:
                data = {**data, "values": [0.0, *vals, 0.0]}
        return data

    @model_validator(mode="after")
    def _check(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("조각 수는 breakpoints 수 + 1 이어야 합니다")
        if any(not b0 < b1 for b0, b1 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints는 순증가여야 합니다")
        if any(not math.isfinite(b) for b in self.breakpoints):
            raise ValueError("breakpoints는 유한해야 합니다")
        if self.values[0] != 0.0 or self.values[-1] != 0.0:
            raise ValueError("지지 구간 밖의 값은 0이어야 합니다")
        return self

    @classmethod
    def indicator(cls, a: float, b: float, height: float = 1.0) -> "StepFunction1D":
        return cls(breakpoints=[a, b], values=[0.0, height, 0.0])

    def pieces(self) -> List[Tuple[float, float, float]]:
        """(a, b, 값) 목록, 바깥 두 조각은 무한 구간"""
        edges = [-math.inf, *self.breakpoints, math.inf]
        return [(edges[i], edges[i + 1], self.values[i]) for i in range(len(self.values))]

    def evaluate(self, x) -> np.ndarray:
        idx = np.searchsorted(np.asarray(self.breakpoints, dtype=float), np.asarray(x, dtype=float), side="right")
        return np.asarray(self.values, dtype=float)[idx]

    @property
    def support(self) -> Tuple[float, float]:
        if not self.breakpoints:
            return (0.0, 0.0)
        return (self.breakpoints[0], self.breakpoints[-1])

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)

    def scaled(self, c: float) -> "StepFunction1D":
        return StepFunction1D(breakpoints=list(self.breakpoints), values=[c * v for v in self.values])


@dataclass(frozen=True)
class WeightedSample:
    """노름 계산기의 공통 입력: 값과 (로그) 질량"""
    values: np.ndarray
    log_masses: np.ndarray
    infinite_measure: bool = False
    coordinates: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        log_masses = np.asarray(self.log_masses, dtype=float)
        if values.shape != log_masses.shape:
            raise LengthMismatch(f"값 {values.shape} 과 질량 {log_masses.shape} 의 길이가 다릅니다")
        if np.any(~np.isfinite(log_masses)):
            raise NonpositiveMass("질량은 모두 양수여야 합니다")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "log_masses", log_masses)

    @classmethod
    def from_space(cls, space: FinitePointSpace, values) -> "WeightedSample":
        values = np.asarray(values, dtype=float)
        if values.shape != (space.n_points,):
            raise LengthMismatch(f"값 {len(values)}개, 점 {space.n_points}개")
        return cls(values, space.log_masses, space.infinite_measure, space.coordinates)

    @classmethod
    def from_masses(cls, values, masses) -> "WeightedSample":
        masses = np.asarray(masses, dtype=float)
        if np.any(masses <= 0):
            raise NonpositiveMass("질량은 모두 양수여야 합니다")
        return cls(np.asarray(values, dtype=float), np.log(masses))

    def with_values(self, values) -> "WeightedSample":
        return WeightedSample(np.asarray(values, dtype=float), self.log_masses,
                              self.infinite_measure, self.coordinates)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def masses(self) -> np.ndarray:
        return np.exp(self.log_masses)


AnySpace = Union[FinitePointSpace, IntervalDomain1D]


# --- 생성 ---

def infer_k0(log_distances: np.ndarray, seed: int = 0) -> float:
    """준삼각 부등식을 만족하는 최소 K₀ (n ≤ 512 전수, 그 외 표본)"""
    d = np.asarray(log_distances, dtype=float)
    n = len(d)
    if n < 3:
        return 1.0
    worst = -np.inf
    if n <= FULL_TRIPLE_LIMIT:
        for y in range(n):
            denom = np.logaddexp(d[:, y][:, None], d[y, :][None, :])
            with np.errstate(invalid="ignore"):
                ratio = d - denom
            ratio[~np.isfinite(ratio)] = -np.inf
            worst = max(worst, float(ratio.max()))
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, TRIPLE_SAMPLES))
        keep = x != z
        x, y, z = x[keep], y[keep], z[keep]
        ratio = d[x, z] - np.logaddexp(d[x, y], d[y, z])
        worst = float(ratio.max())
        logger.debug("K0 표본 검사: 삼중 %d개", len(x))
    return max(1.0, math.exp(worst))


def build_finite_space(distances, masses, k0: Optional[float] = None,
                       labels: Optional[Sequence[str]] = None,
                       log_scale: bool = False) -> FinitePointSpace:
    """
    거리표와 질량으로 유한 공간을 만들고 검증

    Args:
        distances: n×n 거리표 (log_scale이면 log2 값)
        masses: 점 질량 n개 (log_scale이면 log2 값)
        k0: 준삼각 상수, 없으면 최소값을 계산해 저장
        labels: 점 라벨
        log_scale: 입력이 log2 값인지 여부

    Returns:
        FinitePointSpace: 검증된 공간
    """
    table = np.asarray(distances, dtype=float)
    mass = np.asarray(masses, dtype=float)
    n = len(mass)
    if mass.ndim != 1 or n == 0:
        raise InvalidInput("질량은 비어 있지 않은 1차원 목록이어야 합니다")
    if table.shape != (n, n):
        raise LengthMismatch(f"거리표 {table.shape} 가 점 {n}개와 맞지 않습니다")
    if labels is not None and len(labels) != n:
        raise LengthMismatch("라벨 수가 점 수와 다릅니다")
    if not np.array_equal(table, table.T):
        i, j = np.argwhere(table != table.T)[0]
        raise AsymmetricDistance(f"ρ({i},{j}) = {table[i, j]} ≠ ρ({j},{i}) = {table[j, i]}")

    if log_scale:
        log_mass = mass * LN2
        log_dist = table * LN2
        np.fill_diagonal(log_dist, -np.inf)
        if np.any(~np.isfinite(log_mass)):
            raise NonpositiveMass("log2 질량은 유한해야 합니다")
        off = ~np.eye(n, dtype=bool)
        if np.any(log_dist[off] == -np.inf):
            raise ZeroDistanceDistinctPoints("서로 다른 점 사이의 거리가 0 입니다")
    else:
        if np.any(np.diag(table) != 0.0):
            raise InvalidInput("ρ(x, x) 는 0 이어야 합니다")
        off = ~np.eye(n, dtype=bool)
        if np.any(table[off] < 0) or np.any(np.isnan(table)):
            raise InvalidInput("거리는 음이 아닌 실수여야 합니다")
        if np.any(table[off] == 0.0):
            i, j = np.argwhere((table == 0.0) & off)[0]
            raise ZeroDistanceDistinctPoints(f"서로 다른 점 {i}, {j} 사이의 거리가 0 입니다")
        if np.any(mass <= 0) or np.any(~np.isfinite(mass)):
            raise NonpositiveMass("질량은 모두 양의 유한값이어야 합니다")
        log_mass = np.log(mass)
        with np.errstate(divide="ignore"):
            log_dist = np.log(table)

    inferred = infer_k0(log_dist)
    if k0 is None:
        k0 = inferred
    elif k0 < 1.0 or inferred > k0 * (1.0 + 1e-12):
        raise QuasiTriangleViolation(f"필요한 K₀ = {inferred:.6g} > 주어진 k0 = {k0:.6g}")
    return FinitePointSpace(log_mass, log_dist, k0=k0, labels=labels)


def _power_tower_label(k: int) -> str:
    return str(2 ** (2 ** k)) if k <= 6 else f"2^(2^{k})"


def double_exponential_space(k_max: int) -> FinitePointSpace:
    """점 2^{2^k} (k = 1..k_max), μ({2^{2^k}}) = 2^k, ρ = |x − y|"""
    if k_max < 2:
        raise InvalidInput(f"k_max ≥ 2 이어야 합니다: {k_max}")
    k = np.arange(1, k_max + 1)
    log_pos = (2.0 ** k) * LN2
    hi = np.maximum(log_pos[:, None], log_pos[None, :])
    lo = np.minimum(log_pos[:, None], log_pos[None, :])
    log_dist = log_sub_array(hi, lo)
    return FinitePointSpace(k * LN2, log_dist, k0=1.0,
                            labels=[_power_tower_label(int(j)) for j in k],
                            name=f"dexp({k_max})")


def geometric_space(k_max: int, base: float = 2.0, mass_exponent: float = 1.0) -> FinitePointSpace:
    """점 b^k (k = 1..k_max), μ({b^k}) = b^{k·m}; k > k_max 연장은 GeometricTail로 기록"""
    if k_max < 2:
        raise InvalidInput(f"k_max ≥ 2 이어야 합니다: {k_max}")
    if base < 2.0 or mass_exponent <= 0:
        raise InvalidInput("base ≥ 2, mass_exponent > 0 이어야 합니다")
    k = np.arange(1, k_max + 1)
    lb = math.log(base)
    log_pos = k * lb
    hi = np.maximum(log_pos[:, None], log_pos[None, :])
    lo = np.minimum(log_pos[:, None], log_pos[None, :])
    labels = [f"{base:g}^{j}" for j in k]
    return FinitePointSpace(k * mass_exponent * lb, log_sub_array(hi, lo), k0=1.0, labels=labels,
                            tail=GeometricTail(base, mass_exponent, k_max),
                            name=f"geometric({k_max},{base:g},{mass_exponent:g})")


def euclidean_nodes_space(coordinates, masses, infinite_measure: bool = False) -> FinitePointSpace:
    """1차원 좌표와 질량으로 만든 좌표 기반 공간 (거리는 지연 계산)"""
    coordinates = np.asarray(coordinates, dtype=float)
    masses = np.asarray(masses, dtype=float)
    if coordinates.shape != masses.shape:
        raise LengthMismatch("좌표와 질량의 길이가 다릅니다")
    if np.any(masses <= 0):
        raise NonpositiveMass("질량은 모두 양수여야 합니다")
    if len(np.unique(coordinates)) != len(coordinates):
        raise ZeroDistanceDistinctPoints("좌표가 중복된 노드가 있습니다")
    return FinitePointSpace(np.log(masses), coordinates=coordinates, k0=1.0,
                            labels=[repr(float(c)) for c in coordinates],
                            infinite_measure=infinite_measure, name="nodes")


# --- 기본 연산 ---

def _as_log_radius(radius) -> float:
    if isinstance(radius, LogScalar):
        if radius.sign <= 0:
            raise InvalidInput("반지름은 양수여야 합니다")
        return radius.log_magnitude
    if radius <= 0:
        raise InvalidInput("반지름은 양수여야 합니다")
    return math.log(radius)


def ball_measure(space: AnySpace, center: PointId, radius) -> LogScalar:
    """열린 공 B(center, radius)의 측도"""
    log_r = _as_log_radius(radius)
    if isinstance(space, IntervalDomain1D):
        r = radius.to_float() if isinstance(radius, LogScalar) else float(radius)
        return LogScalar.from_float(space.ball_measure(float(center), r))
    return LogScalar.from_log(space.log_ball_measure(center, log_r))


def mutual_min_measure(space: AnySpace, x: PointId, y: PointId) -> LogScalar:
    """U(x, y) = min{μ(B(x, ρ(x,y))), μ(B(y, ρ(x,y)))}"""
    if isinstance(space, IntervalDomain1D):
        x, y = float(x), float(y)
        if x == y:
            raise SamePoint("U(x, x) 는 정의하지 않습니다")
        r = abs(x - y)
        return LogScalar.from_float(min(space.ball_measure(x, r), space.ball_measure(y, r)))
    i, j = space.point_index(x), space.point_index(y)
    if i == j:
        raise SamePoint("U(x, x) 는 정의하지 않습니다")
    return LogScalar.from_log(space.log_u[i, j])


def _tree_logsumexp(log_terms: np.ndarray) -> float:
    """고정 순서 쌍별 트리 축약 (스레드 수와 무관하게 같은 결과)"""
    terms = np.asarray(log_terms, dtype=float)
    if terms.size == 0:
        return -math.inf
    while terms.size > 1:
        if terms.size % 2:
            terms = np.append(terms, -np.inf)
        terms = np.logaddexp(terms[0::2], terms[1::2])
    return float(terms[0])


def integrate(space: Union[FinitePointSpace, WeightedSample], values) -> float:
    """Σ_x f(x)·μ({x}), 로그 영역 트리 축약"""
    log_masses = space.log_masses
    values = np.asarray(values, dtype=float)
    if values.shape != log_masses.shape:
        raise LengthMismatch(f"값 {values.size}개, 점 {log_masses.size}개")
    with np.errstate(divide="ignore"):
        log_terms = np.log(np.abs(values)) + log_masses
    pos = _tree_logsumexp(log_terms[values > 0])
    neg = _tree_logsumexp(log_terms[values < 0])
    return exp_checked(pos, "적분값") - exp_checked(neg, "적분값")


def diameter(space: AnySpace) -> LogScalar:
    if isinstance(space, IntervalDomain1D):
        return LogScalar.from_float(space.diameter)
    return LogScalar.from_log(float(np.max(space.log_distances)))


def holder_seminorm(space: FinitePointSpace, values, beta: float) -> float:
    """sup_{x≠y} |f(x) − f(y)| / ρ(x, y)^β"""
    if beta <= 0:
        raise InvalidInput(f"beta > 0 이어야 합니다: {beta}")
    values = np.asarray(values, dtype=float)
    if values.shape != (space.n_points,):
        raise LengthMismatch("값의 길이가 점 수와 다릅니다")
    diff = np.abs(values[:, None] - values[None, :])
    with np.errstate(divide="ignore"):
        log_q = np.log(diff) - beta * space.log_distances
    np.fill_diagonal(log_q, -np.inf)
    worst = float(log_q.max())
    return 0.0 if worst == -math.inf else exp_checked(worst, "Hölder 반노름")


def space_info(space: AnySpace) -> dict:
    """공간 요약"""
    if isinstance(space, IntervalDomain1D):
        return {
            "type": "intervals",
            "n_intervals": len(space.intervals),
            "whole_line": space.whole_line,
            "density_exponent": space.density_exponent,
            "measure": space.measure if not space.whole_line else math.inf,
            "diameter": space.diameter,
            "k0": 1.0,
        }
    lm = space.log_masses
    return {
        "type": "finite",
        "name": space.name,
        "n_points": space.n_points,
        "k0": space.k0,
        "log2_diameter": diameter(space).log2,
        "log2_total_mass": space.log_total_mass / LN2,
        "log2_min_mass": float(lm.min()) / LN2,
        "log2_max_mass": float(lm.max()) / LN2,
        "has_tail": space.tail is not None,
    }


# --- 1차원 이산화 ---

def domain_pieces(domain: IntervalDomain1D, f: StepFunction1D) -> List[Tuple[float, float, float]]:
    """Ω ∩ (f의 조각) 으로 자른 (a, b, 값) 목록, 무한 조각 포함"""
    out = []
    for lo, hi in domain.intervals:
        for a, b, c in f.pieces():
            a2, b2 = max(a, lo), min(b, hi)
            if a2 < b2:
                out.append((a2, b2, c))
    return out


def sample_1d(domain: IntervalDomain1D, f: StepFunction1D,
              rule: QuadratureRule = DEFAULT_RULE) -> Tuple[FinitePointSpace, WeightedSample]:
    """
    구간 합집합 위의 계단함수를 graded Gauss–Legendre 노드로 이산화

    무한 조각은 f = 0 이므로 버리고, 그 경우 표본에 무한 측도 표시를 남깁니다.
    조각마다 f가 상수이므로 계단함수의 적분은 정확합니다.
    """
    if domain.is_empty:
        raise EmptyDomain("구간 목록이 비어 있습니다")
    if domain.density_exponent != 0.0:
        raise InvalidInput("sample_1d 는 Lebesgue 측도 (density_exponent = 0) 에서만 지원합니다")
    nodes, weights, vals = [], [], []
    infinite = False
    for a, b, c in domain_pieces(domain, f):
        if math.isinf(a) or math.isinf(b):
            infinite = True
            continue
        x, w = graded_rule(a, b, rule)
        nodes.append(x)
        weights.append(w)
        vals.append(np.full(len(x), c))
    if not nodes:
        raise EmptyDomain("f 의 지지 구간과 겹치는 유한 구간이 없습니다")
    x, w, v = np.concatenate(nodes), np.concatenate(weights), np.concatenate(vals)
    space = euclidean_nodes_space(x, w, infinite_measure=infinite)
    logger.debug("sample_1d: 노드 %d개, 무한 측도=%s", len(x), infinite)
    return space, WeightedSample.from_space(space, v)
