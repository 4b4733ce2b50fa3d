"""
최대함수 연산자 모듈

유한 공간 위의 Hardy–Littlewood 최대함수, Muckenhoupt A_p 상수, 최대 연산자 노름의
아래/위 추정, Rubio de Francia 반복을 계산합니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from utils.ball_family import BallFamily, enumerate_ball_family, full_space_family, resolve_family
from utils.errors import InvalidInput, InvalidOperatorNorm, LengthMismatch, NonpositiveWeight
from utils.function_spaces import evaluate_norm
from utils.norm_specs import BallFamilySpec, LInfSpec, LpSpec
from utils.space_core import FinitePointSpace

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 64
DEFAULT_RUBIO_K_MAX = 40
MIN_RUBIO_K_MAX = 8

__all__ = [
    "BallFamily", "enumerate_ball_family", "full_space_family", "resolve_family",
    "maximal_function", "muckenhoupt_constant", "maximal_operator_norm", "schur_upper_bound",
    "rubio_de_francia", "weight_dilation_check", "OperatorNormEstimate",
]


def _family(space: FinitePointSpace, family) -> BallFamily:
    if family is None:
        return enumerate_ball_family(space)
    if isinstance(family, BallFamilySpec):
        return resolve_family(space, family)
    return family


def _check_values(space: FinitePointSpace, values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (space.n_points,):
        raise LengthMismatch(f"값 {values.size}개, 점 {space.n_points}개")
    return values


def maximal_function(space: FinitePointSpace, values, family=None) -> np.ndarray:
    """Mf(x) = max_{B ∋ x} μ(B)^{-1} ∫_B |f| dμ"""
    fam = _family(space, family)
    fam.require_cover()
    a = np.abs(_check_values(space, values))
    avg = fam.weighted_averages(space, a)
    return np.max(np.where(fam.membership, avg[:, None], -np.inf), axis=0)


def muckenhoupt_constant(space: FinitePointSpace, weight, p: float, family=None) -> float:
    """
    [ω]_{A_p} = sup_B 평균(ω)·(평균(ω^{1/(1−p)}))^{p−1}, p = 1 이면 sup_B 평균(ω)/min_B ω
    """
    if p < 1:
        raise InvalidInput(f"p ≥ 1 이어야 합니다: {p}")
    w = _check_values(space, weight)
    if np.any(~(w > 0)) or np.any(~np.isfinite(w)):
        raise NonpositiveWeight("가중치는 모두 양의 유한값이어야 합니다")
    fam = _family(space, family)
    avg = fam.weighted_averages(space, w)
    if p == 1:
        low = np.min(np.where(fam.membership, w[None, :], np.inf), axis=1)
        return float(np.max(avg / low))
    dual = fam.weighted_averages(space, w ** (1.0 / (1.0 - p)))
    return float(np.max(avg * dual ** (p - 1.0)))


def schur_upper_bound(space: FinitePointSpace, family=None) -> float:
    """
    max_x Σ_y m(x,y) μ(y), m(x,y) = max_{B ∋ x,y} 1/μ(B)

    Mf ≤ ∫ m(·,y)|f(y)| dμ(y) 이고 m 이 대칭이므로 모든 L^p (p ≥ 1) 노름의 위 상한입니다.
    """
    fam = _family(space, family)
    w = np.exp(space.log_masses - space.log_masses.max())
    inv = 1.0 / (fam.membership @ w)
    best = 0.0
    for x in range(space.n_points):
        rows = fam.membership[:, x]
        m_row = np.max(inv[rows, None] * fam.membership[rows], axis=0)
        best = max(best, float(m_row @ w))
    return best


@dataclass(frozen=True)
class OperatorNormEstimate:
    lower: float
    upper: Optional[float]
    trials: int

    def __iter__(self):
        return iter((self.lower, self.upper))


def maximal_operator_norm(space: FinitePointSpace, spec, trials: int = DEFAULT_TRIALS,
                          seed: int = 0, family=None) -> OperatorNormEstimate:
    """
    ‖M‖_{Y→Y} 의 추정

    아래 추정은 모든 공의 지시함수와 시드 고정 난수 시험함수 위의 최대 비율이고,
    위 추정은 가중치 없는 L^p (p ≥ 1) 에서만 Schur 상한으로 제공합니다.
    """
    if isinstance(spec, LInfSpec):
        return OperatorNormEstimate(1.0, 1.0, trials)
    fam = _family(space, family)
    best = 0.0
    for member in fam.membership:
        f = member.astype(float)
        best = max(best, evaluate_norm(space, maximal_function(space, f, fam), spec)
                   / evaluate_norm(space, f, spec))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        f = rng.exponential(size=space.n_points) * (rng.random(space.n_points) < 0.5)
        if not f.any():
            continue
        best = max(best, evaluate_norm(space, maximal_function(space, f, fam), spec)
                   / evaluate_norm(space, f, spec))
    upper = None
    if isinstance(spec, LpSpec) and spec.weight is None and spec.p >= 1:
        upper = max(schur_upper_bound(space, fam), best)
    logger.debug("‖M‖ 추정: lower=%.6g upper=%s (공 %d개, 시행 %d회)", best, upper, fam.n_balls, trials)
    return OperatorNormEstimate(best, upper, trials)


def rubio_de_francia(space: FinitePointSpace, g, spec, m_norm: float,
                     k_max: int = DEFAULT_RUBIO_K_MAX, family=None,
                     lower_estimate: Optional[float] = None) -> np.ndarray:
    """R g = Σ_{k ≤ k_max} M^k g / (2‖M‖)^k, M⁰g = |g|"""
    if k_max < MIN_RUBIO_K_MAX:
        raise InvalidInput(f"k_max ≥ {MIN_RUBIO_K_MAX} 이어야 합니다: {k_max}")
    if not m_norm > 0 or not math.isfinite(m_norm):
        raise InvalidOperatorNorm(f"m_norm 은 양의 유한값이어야 합니다: {m_norm}")
    fam = _family(space, family)
    if lower_estimate is None:
        lower_estimate = maximal_operator_norm(space, spec, trials=0, family=fam).lower
    if m_norm < lower_estimate * (1.0 - 1e-12):
        raise InvalidOperatorNorm(f"m_norm = {m_norm:.6g} 이 아래 추정 {lower_estimate:.6g} 보다 작습니다")
    term = np.abs(_check_values(space, g))
    total = term.copy()
    for _ in range(k_max):
        term = maximal_function(space, term, fam) / (2.0 * m_norm)
        total = total + term
    return total


def weight_dilation_check(space: FinitePointSpace, weight, p: float, family=None,
                          lambdas: Sequence[float] = (2.0, 4.0)) -> float:
    """
    max over 공 B, λ 의 ω(λB)/ω(B) ÷ ([ω]_{A_p}·(μ(λB)/μ(B))^p), 1 이하이면 팽창 부등식 성립
    """
    fam = _family(space, family)
    w = _check_values(space, weight)
    const = muckenhoupt_constant(space, w, p, fam)
    scale = np.exp(space.log_masses - space.log_masses.max())
    worst = 0.0
    for lam in lambdas:
        big = BallFamily._build(space, fam.centers, fam.log_radii + math.log(lam))
        w_ratio = (big.membership @ (w * scale)) / (fam.membership @ (w * scale))
        mu_ratio = np.exp(big.log_measures - fam.log_measures)
        worst = max(worst, float(np.max(w_ratio / (const * mu_ratio ** p))))
    return worst
