"""
로그 영역 스칼라 모듈

2^{2^k} 같은 이중 지수 크기는 k ≥ 10부터 float 범위를 넘기 때문에
(부호, ln|값|) 쌍으로 값을 저장하고 덧셈은 log-sum-exp로 처리합니다.
"""

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Union

import numpy as np
from scipy.special import logsumexp

from utils.errors import InvalidInput, Overflow

# float64로 복원 가능한 최대 로그 크기
MAX_FLOAT_LOG = math.log(np.finfo(np.float64).max)

Number = Union[int, float]


@total_ordering
@dataclass(frozen=True)
class LogScalar:
    """부호와 로그 크기로 표현한 실수"""

    sign: int
    log_magnitude: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign은 -1, 0, 1 중 하나여야 합니다: {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "log_magnitude", -math.inf)

    # --- 생성 ---

    @classmethod
    def from_float(cls, value: Number) -> "LogScalar":
        if value == 0:
            return cls(0, -math.inf)
        if math.isinf(value):
            return cls(1 if value > 0 else -1, math.inf)
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def from_log(cls, log_magnitude: float, sign: int = 1) -> "LogScalar":
        if log_magnitude == -math.inf:
            return cls(0, -math.inf)
        return cls(sign, float(log_magnitude))

    @classmethod
    def from_log2(cls, log2_magnitude: float, sign: int = 1) -> "LogScalar":
        return cls.from_log(log2_magnitude * math.log(2.0), sign)

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0, -math.inf)

    @classmethod
    def infinity(cls) -> "LogScalar":
        return cls(1, math.inf)

    # --- 조회 ---

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def is_infinite(self) -> bool:
        return self.sign != 0 and math.isinf(self.log_magnitude)

    @property
    def log2(self) -> float:
        return self.log_magnitude / math.log(2.0)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.is_infinite:
            return self.sign * math.inf
        if self.log_magnitude > MAX_FLOAT_LOG:
            raise Overflow(f"ln|x| = {self.log_magnitude:.6g} 은 float64로 표현할 수 없습니다")
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.to_float()

    # --- 연산 ---

    def __neg__(self) -> "LogScalar":
        return LogScalar(-self.sign, self.log_magnitude)

    def __abs__(self) -> "LogScalar":
        return LogScalar(abs(self.sign), self.log_magnitude)

    def __add__(self, other: Union["LogScalar", Number]) -> "LogScalar":
        other = as_log_scalar(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        if hi.is_infinite:
            return hi
        if hi.sign == lo.sign:
            return LogScalar(hi.sign, log_add(hi.log_magnitude, lo.log_magnitude))
        if hi.log_magnitude == lo.log_magnitude:
            return LogScalar.zero()
        return LogScalar(hi.sign, log_sub(hi.log_magnitude, lo.log_magnitude))

    __radd__ = __add__

    def __sub__(self, other: Union["LogScalar", Number]) -> "LogScalar":
        return self + (-as_log_scalar(other))

    def __rsub__(self, other: Union["LogScalar", Number]) -> "LogScalar":
        return as_log_scalar(other) - self

    def __mul__(self, other: Union["LogScalar", Number]) -> "LogScalar":
        other = as_log_scalar(other)
        if self.sign == 0 or other.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["LogScalar", Number]) -> "LogScalar":
        other = as_log_scalar(other)
        if other.sign == 0:
            raise ZeroDivisionError("LogScalar 0으로 나눌 수 없습니다")
        if self.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __pow__(self, exponent: float) -> "LogScalar":
        if self.sign < 0:
            raise ValueError("음수의 실수 거듭제곱은 지원하지 않습니다")
        if self.sign == 0:
            return LogScalar.zero() if exponent > 0 else LogScalar.infinity()
        return LogScalar(1, self.log_magnitude * exponent)

    # --- 비교 ---

    def _key(self):
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.log_magnitude)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = LogScalar.from_float(other)
        if not isinstance(other, LogScalar):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        other = as_log_scalar(other)
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogScalar(0)"
        return f"LogScalar({'-' if self.sign < 0 else ''}exp({self.log_magnitude!r}))"


def as_log_scalar(value: Union[LogScalar, Number]) -> LogScalar:
    if isinstance(value, LogScalar):
        return value
    return LogScalar.from_float(value)


def log_add(a: float, b: float) -> float:
    """ln(e^a + e^b)"""
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def log_sub(a: float, b: float) -> float:
    """ln(e^a - e^b), a ≥ b"""
    if b > a:
        raise ValueError("log_sub는 a ≥ b 에서만 정의됩니다")
    if b == -math.inf:
        return a
    if a == b:
        return -math.inf
    return a + math.log(-math.expm1(b - a))


def log_sum(log_values: Iterable[float]) -> float:
    """고정 순서로 ln Σ e^{a_i}를 계산 (빈 입력은 -inf)"""
    arr = np.asarray(list(log_values) if not isinstance(log_values, np.ndarray) else log_values,
                     dtype=float)
    if arr.size == 0 or np.all(arr == -np.inf):
        return -math.inf
    return float(logsumexp(arr))


def log_sub_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """원소별 ln(e^a - e^b) (a ≥ b 가정)"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = a + np.log(-np.expm1(b - a))
    out = np.where(b == -np.inf, a, out)
    return np.where(a == b, -np.inf, out)


def exp_checked(log_value: float, what: str = "값") -> float:
    """로그 값을 float로 복원하되 범위를 넘으면 Overflow"""
    if log_value > MAX_FLOAT_LOG:
        raise Overflow(f"{what}이(가) float64 범위를 넘었습니다 (ln = {log_value:.6g})")
    return math.exp(log_value)


def exp_checked_array(log_values: np.ndarray, what: str = "값") -> np.ndarray:
    log_values = np.asarray(log_values, dtype=float)
    finite = log_values[np.isfinite(log_values)]
    if finite.size and finite.max() > MAX_FLOAT_LOG:
        raise Overflow(f"{what}이(가) float64 범위를 넘었습니다 (ln = {finite.max():.6g})")
    return np.exp(log_values)


def parse_number(text: Union[str, Number]) -> LogScalar:
    """
    '1e-3' 같은 보통 숫자 또는 'logB:x' (= B^x) 를 LogScalar 로 변환

    'log2:1024' 처럼 float 로 넘치는 크기를 그대로 표현할 수 있습니다.
    """
    if not isinstance(text, str):
        return as_log_scalar(float(text))
    raw = text.strip()
    try:
        if raw.lower().startswith("log"):
            head, _, exponent = raw.partition(":")
            base = head[3:]
            if not exponent:
                raise ValueError(raw)
            log_base = 1.0 if base in ("", "e") else math.log(float(base))
            return LogScalar.from_log(float(exponent) * log_base)
        return LogScalar.from_float(float(raw))
    except ValueError:
        raise InvalidInput(f"숫자 형식이 올바르지 않습니다: {text!r}")


def parse_float(text: Union[str, Number]) -> float:
    """parse_number 후 float 로 복원 (범위를 넘으면 Overflow)"""
    value = parse_number(text)
    return value.to_float()
