"""
노름 명세 모델

JSON으로 주고받는 노름 설정(NormSpec)과 그 구성 요소인 Orlicz 함수, Morrey φ 함수,
공 집합 설정, 최대함수형 가중치를 pydantic 모델로 정의합니다.
"""

import math
from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError, field_validator, model_validator

from utils.errors import InvalidInput


class OrliczFunctionSpec(BaseModel):
    """Orlicz 함수 Φ 와 선언된 하한/상한 형(type)"""
    kind: Literal["power", "power_scaled", "exp_minus_one", "tabulated"] = "power"
    p: float = Field(1.0, gt=0)
    lower_type: Optional[float] = Field(None, gt=0)
    upper_type: Optional[float] = Field(None, gt=0)
    type_constant: float = Field(1.0, ge=1.0)
    # tabulated 전용: 양수 격자와 값 (로그-로그 보간)
    t_grid: Optional[List[float]] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _defaults(self):
        if self.kind in ("power", "power_scaled"):
            if self.lower_type is None:
                self.lower_type = self.p
            if self.upper_type is None:
                self.upper_type = self.p
        elif self.kind == "exp_minus_one":
            if self.lower_type is None:
                self.lower_type = 1.0
        elif self.kind == "tabulated":
            if not self.t_grid or not self.values or len(self.t_grid) != len(self.values):
                raise ValueError("tabulated Φ 는 같은 길이의 t_grid, values 가 필요합니다")
            t, v = np.asarray(self.t_grid), np.asarray(self.values)
            if np.any(t <= 0) or np.any(np.diff(t) <= 0):
                raise ValueError("t_grid 는 양의 순증가 격자여야 합니다")
            if np.any(v <= 0) or np.any(np.diff(v) <= 0):
                raise ValueError("tabulated Φ 값은 양수이고 순증가여야 합니다")
        return self

    @classmethod
    def power(cls, p: float) -> "OrliczFunctionSpec":
        return cls(kind="power", p=p)

    @classmethod
    def power_scaled(cls, p: float) -> "OrliczFunctionSpec":
        return cls(kind="power_scaled", p=p)

    @classmethod
    def exp_minus_one(cls) -> "OrliczFunctionSpec":
        return cls(kind="exp_minus_one")

    @classmethod
    def tabulated(cls, t_grid, values, lower_type=None, upper_type=None) -> "OrliczFunctionSpec":
        return cls(kind="tabulated", t_grid=[float(x) for x in t_grid], values=[float(x) for x in values],
                   lower_type=lower_type, upper_type=upper_type)

    @property
    def is_convex(self) -> bool:
        if self.kind in ("power", "power_scaled"):
            return self.p >= 1.0
        return True

    def _log_slopes(self):
        lt, lv = np.log(self.t_grid), np.log(self.values)
        return lt, lv, (lv[1] - lv[0]) / (lt[1] - lt[0]), (lv[-1] - lv[-2]) / (lt[-1] - lt[-2])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return t ** self.p
        if self.kind == "power_scaled":
            return t ** self.p / self.p
        if self.kind == "exp_minus_one":
            with np.errstate(over="ignore"):
                return np.expm1(t)
        lt, lv, s0, s1 = self._log_slopes()
        with np.errstate(divide="ignore"):
            x = np.log(t)
        y = np.interp(x, lt, lv)
        y = np.where(x < lt[0], lv[0] + s0 * (x - lt[0]), y)
        y = np.where(x > lt[-1], lv[-1] + s1 * (x - lt[-1]), y)
        return np.where(t > 0, np.exp(y), 0.0)

    def inverse(self, y):
        """Φ^{-1}(y)"""
        y = np.asarray(y, dtype=float)
        if self.kind == "power":
            return y ** (1.0 / self.p)
        if self.kind == "power_scaled":
            return (self.p * y) ** (1.0 / self.p)
        if self.kind == "exp_minus_one":
            return np.log1p(y)
        lt, lv, s0, s1 = self._log_slopes()
        with np.errstate(divide="ignore"):
            x = np.log(y)
        out = np.interp(x, lv, lt)
        out = np.where(x < lv[0], lt[0] + (x - lv[0]) / s0, out)
        out = np.where(x > lv[-1], lt[-1] + (x - lv[-1]) / s1, out)
        return np.where(y > 0, np.exp(out), 0.0)

    def check_types(self, t_grid=None, s_grid=None, rtol: float = 1e-9) -> bool:
        """Φ(0)=0, 격자 위 순증가, 선언된 하한/상한 형 부등식을 표본 검사"""
        t = np.geomspace(1e-3, 1e3, 61) if t_grid is None else np.asarray(t_grid, dtype=float)
        s = np.geomspace(1e-2, 1e2, 41) if s_grid is None else np.asarray(s_grid, dtype=float)
        if float(self(0.0)) != 0.0:
            return False
        if np.any(np.diff(self(t)) <= 0):
            return False
        base = self(t)[None, :]
        scaled = self(s[:, None] * t[None, :])
        c = self.type_constant * (1.0 + rtol)
        small, large = s < 1.0, s > 1.0
        if self.lower_type is not None and small.any():
            bound = c * s[small, None] ** self.lower_type * base
            if np.any(scaled[small] > bound):
                return False
        if self.upper_type is not None and large.any():
            bound = c * s[large, None] ** self.upper_type * base
            if np.any(scaled[large] > bound):
                return False
        return True


class PhiFunctionSpec(BaseModel):
    """
    Morrey형 함수 φ(B)

    power: r < 1/2 에서 r^{−λ_small/p}, 그 외 r^{−λ/p}.
      λ_small 은 스칼라이거나 점마다 하나씩 주는 목록(공의 중심 x 의 λ(x))입니다.
    measure_power: μ(B)^{−1/p}
    constant: c
    exponent e 가 있으면 φ^e 를 씁니다.
    """
    kind: Literal["power", "measure_power", "constant"] = "measure_power"
    p: float = Field(1.0, gt=0)
    lam: float = 0.0
    lam_small: Union[float, List[float], None] = None
    c: float = Field(1.0, gt=0)
    exponent: float = Field(1.0, gt=0)

    @field_validator("lam_small")
    @classmethod
    def _finite_lam_small(cls, v):
        values = v if isinstance(v, list) else [] if v is None else [v]
        if not all(math.isfinite(x) for x in values):
            raise ValueError("λ_small 은 유한해야 합니다")
        if isinstance(v, list) and not v:
            raise ValueError("λ_small 목록이 비어 있습니다")
        return v

    @classmethod
    def power(cls, lam: float, p: float, lam_small: Union[float, List[float], None] = None) -> "PhiFunctionSpec":
        if isinstance(lam_small, np.ndarray):
            lam_small = lam_small.tolist()
        return cls(kind="power", lam=lam, p=p, lam_small=lam_small)

    @property
    def per_point(self) -> bool:
        return self.kind == "power" and isinstance(self.lam_small, list)

    @classmethod
    def measure_power(cls, p: float) -> "PhiFunctionSpec":
        return cls(kind="measure_power", p=p)

    @classmethod
    def constant(cls, c: float) -> "PhiFunctionSpec":
        return cls(kind="constant", c=c)

    def raised(self, exponent: float) -> "PhiFunctionSpec":
        return self.model_copy(update={"exponent": self.exponent * exponent})

    def _small_exponent(self, centers):
        if not isinstance(self.lam_small, list):
            return self.lam if self.lam_small is None else self.lam_small
        if centers is None:
            raise InvalidInput("점별 λ_small 에는 공의 중심이 필요합니다")
        return np.asarray(self.lam_small, dtype=float)[np.asarray(centers, dtype=int)]

    def log_value(self, log_radius, log_measure, centers=None):
        """ln φ(B) (반지름, 측도 모두 자연로그; centers 는 점별 λ_small 일 때만 필요)"""
        log_radius = np.asarray(log_radius, dtype=float)
        log_measure = np.asarray(log_measure, dtype=float)
        if self.kind == "constant":
            out = np.full(np.broadcast(log_radius, log_measure).shape, math.log(self.c))
        elif self.kind == "measure_power":
            out = -log_measure / self.p + 0.0 * log_radius
        else:
            lam = np.where(log_radius < math.log(0.5), self._small_exponent(centers), self.lam)
            out = -lam * log_radius / self.p + 0.0 * log_measure
        return self.exponent * out

    def doubling_constant(self, log_radii=None) -> float:
        """max φ(r)/φ(s) (r/s ∈ [1/2, 2]) on a radius grid (측도 의존형은 1 로 봄)"""
        if self.kind != "power":
            return 1.0
        if self.per_point:
            return max(self.model_copy(update={"lam_small": v}).doubling_constant(log_radii)
                       for v in sorted(set(self.lam_small)))
        lr = np.log(np.geomspace(1e-6, 1e6, 241)) if log_radii is None else np.asarray(log_radii, dtype=float)
        ratios = np.linspace(-math.log(2.0), math.log(2.0), 9)
        a = self.log_value(lr[:, None], 0.0)
        b = self.log_value(lr[:, None] + ratios[None, :], 0.0)
        return float(math.exp(np.max(np.abs(a - b))))


class BallRef(BaseModel):
    center: Union[int, str, float]
    radius: Optional[float] = Field(None, gt=0)
    log2_radius: Optional[float] = None

    @model_validator(mode="after")
    def _one_radius(self):
        if (self.radius is None) == (self.log2_radius is None):
            raise ValueError("radius 와 log2_radius 중 정확히 하나가 필요합니다")
        return self

    @property
    def log_radius(self) -> float:
        if self.radius is not None:
            return math.log(self.radius)
        return self.log2_radius * math.log(2.0)


class BallFamilySpec(BaseModel):
    """canonical: 모든 서로 다른 열린 공 / explicit: 지정 목록 / full_space: 전체 공 하나"""
    kind: Literal["canonical", "explicit", "full_space"] = "canonical"
    balls: List[BallRef] = Field(default_factory=list)


class MaximalWeight(BaseModel):
    """직선 위 ω = (M 1_{(a,b)})^δ (A₁ 가중치, 0 ≤ δ < 1)"""
    kind: Literal["maximal_indicator"] = "maximal_indicator"
    a: float
    b: float
    delta: float = Field(0.5, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def _order(self):
        if not self.a < self.b:
            raise ValueError("a < b 이어야 합니다")
        return self

    def evaluate(self, x) -> np.ndarray:
        """닫힌 형태: (a,b) 안 1, 오른쪽 (b−a)/(x−a), 왼쪽 (b−a)/(b−x)"""
        x = np.asarray(x, dtype=float)
        width = self.b - self.a
        m = np.ones_like(x)
        right, left = x >= self.b, x <= self.a
        m = np.where(right, width / np.where(right, x - self.a, 1.0), m)
        m = np.where(left, width / np.where(left, self.b - x, 1.0), m)
        return m ** self.delta


WeightSpec = Optional[Union[List[float], MaximalWeight]]


class LpSpec(BaseModel):
    type: Literal["lp"] = "lp"
    p: float = Field(gt=0)
    weight: WeightSpec = None


class LInfSpec(BaseModel):
    type: Literal["linf"] = "linf"


class LorentzSpec(BaseModel):
    type: Literal["lorentz"] = "lorentz"
    r: float = Field(gt=0)
    tau: float = Field(gt=0, allow_inf_nan=False)
    weight: WeightSpec = None


class OrliczSpec(BaseModel):
    type: Literal["orlicz"] = "orlicz"
    phi: OrliczFunctionSpec
    weight: WeightSpec = None


class VariableLpSpec(BaseModel):
    type: Literal["variable_lp"] = "variable_lp"
    exponent: List[float]
    declared_min: Optional[float] = Field(None, gt=0)
    declared_max: Optional[float] = Field(None, gt=0)

    @field_validator("exponent")
    @classmethod
    def _positive(cls, v):
        if not v or any(not (e > 0 and math.isfinite(e)) for e in v):
            raise ValueError("변수 지수는 양의 유한값이어야 합니다")
        return v

    @model_validator(mode="after")
    def _declared(self):
        lo, hi = min(self.exponent), max(self.exponent)
        if self.declared_min is not None and lo < self.declared_min:
            raise ValueError("지수가 선언된 하한보다 작습니다")
        if self.declared_max is not None and hi > self.declared_max:
            raise ValueError("지수가 선언된 상한보다 큽니다")
        return self


class MorreySpec(BaseModel):
    type: Literal["morrey"] = "morrey"
    p: float = Field(gt=0)
    phi: PhiFunctionSpec
    family: BallFamilySpec = Field(default_factory=BallFamilySpec)


class OrliczMorreySpec(BaseModel):
    type: Literal["orlicz_morrey"] = "orlicz_morrey"
    orlicz: OrliczFunctionSpec
    phi: PhiFunctionSpec
    family: BallFamilySpec = Field(default_factory=BallFamilySpec)


class QuotientSpec(BaseModel):
    type: Literal["quotient"] = "quotient"
    inner: "NormSpec"

    @field_validator("inner")
    @classmethod
    def _not_nested(cls, v):
        if isinstance(v, QuotientSpec):
            raise ValueError("Quotient 안에 Quotient 를 둘 수 없습니다")
        return v


NormSpec = Annotated[
    Union[LpSpec, LInfSpec, LorentzSpec, OrliczSpec, VariableLpSpec,
          MorreySpec, OrliczMorreySpec, QuotientSpec],
    Field(discriminator="type"),
]
QuotientSpec.model_rebuild()

NORM_SPEC_ADAPTER = TypeAdapter(NormSpec)


def parse_norm_spec(data) -> NormSpec:
    """dict 를 NormSpec 으로 검증 (실패 시 InvalidInput)"""
    try:
        return NORM_SPEC_ADAPTER.validate_python(data)
    except ValidationError as e:
        raise InvalidInput(f"노름 명세가 올바르지 않습니다: {e.errors()[0]['msg']}")


def is_triangle_norm(spec) -> bool:
    """삼각 부등식이 성립하는 (볼록) 노름인지"""
    if isinstance(spec, LInfSpec):
        return True
    if isinstance(spec, (LpSpec, MorreySpec)):
        return spec.p >= 1.0
    if isinstance(spec, LorentzSpec):
        return 1.0 <= spec.tau <= spec.r
    if isinstance(spec, OrliczSpec):
        return spec.phi.is_convex
    if isinstance(spec, OrliczMorreySpec):
        return spec.orlicz.is_convex
    if isinstance(spec, VariableLpSpec):
        return min(spec.exponent) >= 1.0
    return False
