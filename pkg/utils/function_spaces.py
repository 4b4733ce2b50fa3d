"""
함수 공간 노름 계산 모듈

유한 가중 표본 위에서 (가중) Lebesgue, Lorentz, Orlicz(Luxemburg), 변수 지수 Lebesgue,
일반화 Morrey, Orlicz–Morrey 노름과 몫 노름, Young 켤레를 계산합니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from dependencies import parallel_map
from utils.ball_family import BallFamily, resolve_family
from utils.errors import (
    EmptyFamily, InvalidInput, LengthMismatch, NonpositiveWeight, SpecMismatch,
)
from utils.log_scalar import exp_checked
from utils.norm_specs import (
    BallFamilySpec, LInfSpec, LorentzSpec, LpSpec, MaximalWeight, MorreySpec,
    OrliczFunctionSpec, OrliczMorreySpec, OrliczSpec, PhiFunctionSpec, QuotientSpec,
    VariableLpSpec, is_triangle_norm,
)
from utils.root_finding import bisect_decreasing
from utils.space_core import FinitePointSpace, WeightedSample

logger = logging.getLogger(__name__)

QUOTIENT_GLOBAL_GRID = 10_000
QUOTIENT_LOCAL_GRID = 41
QUOTIENT_MAX_CANDIDATES = 256

SampleLike = Union[FinitePointSpace, WeightedSample]


# --- 가중치 ---

def resolve_weight(sample: WeightedSample, weight) -> Optional[np.ndarray]:
    """가중치 명세를 표본 위의 양수 배열로 변환"""
    if weight is None:
        return None
    if isinstance(weight, MaximalWeight):
        if sample.coordinates is None:
            raise SpecMismatch("최대함수형 가중치는 1차원 좌표가 있는 공간에서만 쓸 수 있습니다")
        return weight.evaluate(sample.coordinates)
    w = np.asarray(weight, dtype=float)
    if w.shape != sample.values.shape:
        raise LengthMismatch(f"가중치 {w.size}개, 점 {sample.n}개")
    if np.any(~(w > 0)) or np.any(~np.isfinite(w)):
        raise NonpositiveWeight("가중치는 모두 양의 유한값이어야 합니다")
    return w


def _log_weighted_masses(sample: WeightedSample, weight) -> np.ndarray:
    w = resolve_weight(sample, weight)
    if w is None:
        return sample.log_masses
    return sample.log_masses + np.log(w)


# --- Lebesgue ---

def lp_norm(sample: WeightedSample, p: float, weight=None) -> float:
    """(Σ |f|^p ω μ)^{1/p}, 로그 영역"""
    if not p > 0:
        raise InvalidInput(f"p > 0 이어야 합니다: {p}")
    log_wm = _log_weighted_masses(sample, weight)
    a = np.abs(sample.values)
    nz = a > 0
    if not nz.any():
        return 0.0
    log_modular = logsumexp(p * np.log(a[nz]) + log_wm[nz])
    return exp_checked(log_modular / p, "Lp 노름")


def linf_norm(sample: WeightedSample) -> float:
    """양의 질량 점 위의 최대 |f| (유한 공간에서 ess sup)"""
    return float(np.max(np.abs(sample.values))) if sample.n else 0.0


# --- 재배열과 Lorentz ---

@dataclass(frozen=True)
class Rearrangement:
    """f*: [t_{i-1}, t_i) 위에서 levels[i] (비증가, 오른쪽 연속)"""
    levels: np.ndarray
    edges: np.ndarray  # 길이 len(levels) + 1, edges[0] = 0

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        out = np.zeros(t.shape)
        ok = (idx >= 0) & (idx < len(self.levels))
        out[ok] = self.levels[idx[ok]]
        return out

    @property
    def total_mass(self) -> float:
        return float(self.edges[-1])

    def lp_integral(self, p: float) -> float:
        """∫ (f*)^p dt"""
        return float(np.sum(self.levels ** p * np.diff(self.edges)))


def decreasing_rearrangement(sample: WeightedSample, weight=None) -> Rearrangement:
    """|f|를 내림차순 정렬하고 같은 값을 합쳐 ωμ 질량을 누적"""
    wm = np.exp(_log_weighted_masses(sample, weight))
    a = np.abs(sample.values)
    order = np.argsort(-a, kind="stable")
    a, wm = a[order], wm[order]
    levels, idx = np.unique(-a, return_index=True)
    levels = -levels
    masses = np.add.reduceat(wm, idx) if len(idx) else np.zeros(0)
    edges = np.concatenate([[0.0], np.cumsum(masses)])
    return Rearrangement(levels, edges)


def _power_increments(edges: np.ndarray, a: float) -> np.ndarray:
    """t_i^a − t_{i−1}^a (t_0 = 0), 상쇄 없이 계산"""
    hi, lo = edges[1:], edges[:-1]
    out = hi ** a
    pos = lo > 0
    out[pos] = hi[pos] ** a * -np.expm1(a * np.log(lo[pos] / hi[pos]))
    return out


def lorentz_norm(sample: WeightedSample, r: float, tau: float, weight=None) -> float:
    """(∫₀^∞ [t^{1/r} f*(t)]^τ dt/t)^{1/τ}, 재배열 계단 위에서 정확히 적분"""
    if not (r > 0 and tau > 0):
        raise InvalidInput("r, τ > 0 이어야 합니다")
    if math.isinf(tau):
        raise InvalidInput("τ = ∞ 는 지원하지 않습니다")
    rea = decreasing_rearrangement(sample, weight)
    keep = rea.levels > 0
    if not keep.any():
        return 0.0
    inc = _power_increments(rea.edges, tau / r)
    total = float(np.sum(rea.levels[keep] ** tau * inc[keep])) * (r / tau)
    return total ** (1.0 / tau)


# --- Luxemburg형 ---

def _luxemburg(modular, values: np.ndarray) -> float:
    a = np.abs(values)
    top = float(a.max()) if a.size else 0.0
    if top == 0.0:
        return 0.0
    return bisect_decreasing(modular, 1.0, top)


def luxemburg_norm(sample: WeightedSample, phi: OrliczFunctionSpec, weight=None) -> float:
    """inf{λ > 0 : Σ Φ(|f|/λ) ω μ ≤ 1}"""
    wm = np.exp(_log_weighted_masses(sample, weight))
    a = np.abs(sample.values)

    def modular(lam: float) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.sum(phi(a / lam) * wm))

    return _luxemburg(modular, a)


def variable_lp_norm(sample: WeightedSample, exponent) -> float:
    """inf{λ > 0 : Σ (|f|/λ)^{r(x)} μ ≤ 1}"""
    r = np.asarray(exponent, dtype=float)
    if r.shape != sample.values.shape:
        raise LengthMismatch(f"지수 {r.size}개, 점 {sample.n}개")
    if np.any(~(r > 0)) or np.any(~np.isfinite(r)):
        raise InvalidInput("변수 지수는 양의 유한값이어야 합니다")
    a = np.abs(sample.values)
    nz = a > 0
    log_a, r_nz, log_m = np.log(a[nz]), r[nz], sample.log_masses[nz]

    def modular(lam: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.exp(logsumexp(r_nz * (log_a - math.log(lam)) + log_m)))

    return _luxemburg(modular, a)


def log_holder_constants(space: FinitePointSpace, exponent, base_point=0) -> dict:
    """
    전역 log-Hölder 연속성 상수

    C_log = max |r(x) − r(y)|·ln(e + 1/ρ(x,y)),
    C_∞ = max |r(x) − r_∞|·ln(e + ρ(x, x₀)) (r_∞ 는 x₀ 에서 가장 먼 점의 값)
    """
    r = np.asarray(exponent, dtype=float)
    if r.shape != (space.n_points,):
        raise LengthMismatch("지수 길이가 점 수와 다릅니다")
    d = space.log_distances
    diff = np.abs(r[:, None] - r[None, :])
    local = diff * np.logaddexp(1.0, -d)
    np.fill_diagonal(local, 0.0)
    i0 = space.point_index(base_point)
    far = int(np.argmax(d[i0]))
    r_inf = float(r[far])
    decay = np.abs(r - r_inf) * np.logaddexp(1.0, np.where(np.isfinite(d[i0]), d[i0], -np.inf))
    return {"c_log": float(local.max()), "c_inf": float(decay.max()), "r_inf": r_inf,
            "r_min": float(r.min()), "r_max": float(r.max())}


# --- Morrey형 ---

def _family(space: FinitePointSpace, family) -> BallFamily:
    if isinstance(family, BallFamily):
        fam = family
    else:
        fam = resolve_family(space, family if family is not None else BallFamilySpec())
    if fam.n_balls == 0:
        raise EmptyFamily("공 집합이 비어 있습니다")
    return fam


def _check_phi(space: FinitePointSpace, phi: PhiFunctionSpec) -> None:
    if phi.per_point and len(phi.lam_small) != space.n_points:
        raise LengthMismatch(f"λ_small {len(phi.lam_small)}개, 점 {space.n_points}개")


def morrey_norm(space: FinitePointSpace, values, p: float, phi: PhiFunctionSpec,
                family: Union[BallFamily, BallFamilySpec, None] = None) -> float:
    """sup_B (1/φ(B))·(μ(B)^{-1} ∫_B |f|^p dμ)^{1/p}"""
    fam = _family(space, family)
    a = np.abs(np.asarray(values, dtype=float))
    if a.shape != (space.n_points,):
        raise LengthMismatch("값의 길이가 점 수와 다릅니다")
    avg = fam.weighted_averages(space, a ** p)
    _check_phi(space, phi)
    log_phi = phi.log_value(fam.log_radii, fam.log_measures, fam.centers)
    with np.errstate(divide="ignore"):
        log_terms = np.log(avg) / p - log_phi
    best = float(np.max(log_terms))
    return 0.0 if best == -math.inf else exp_checked(best, "Morrey 노름")


def _ball_orlicz_norm(args) -> float:
    a_b, w_b, orlicz, bound = args
    if not np.any(a_b > 0):
        return 0.0
    w_b = w_b / w_b.sum()

    def modular(lam: float) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.sum(orlicz(a_b / lam) * w_b))

    return bisect_decreasing(modular, bound, float(a_b.max()))


def orlicz_morrey_per_ball(space: FinitePointSpace, values, orlicz: OrliczFunctionSpec,
                           phi: PhiFunctionSpec, family) -> np.ndarray:
    """공마다 inf{λ : μ(B)^{-1} ∫_B Φ(|f|/λ) dμ ≤ φ(B)}"""
    fam = _family(space, family)
    a = np.abs(np.asarray(values, dtype=float))
    if a.shape != (space.n_points,):
        raise LengthMismatch("값의 길이가 점 수와 다릅니다")
    w = np.exp(space.log_masses - space.log_masses.max())
    _check_phi(space, phi)
    bounds = np.exp(phi.log_value(fam.log_radii, fam.log_measures, fam.centers))
    jobs = [(a[m], w[m], orlicz, float(b)) for m, b in zip(fam.membership, bounds)]
    return np.asarray(parallel_map(_ball_orlicz_norm, jobs))


def orlicz_morrey_norm(space: FinitePointSpace, values, phi_orlicz: OrliczFunctionSpec,
                       phi_morrey: PhiFunctionSpec, family=None) -> float:
    """공별 Luxemburg형 노름의 상한"""
    return float(np.max(orlicz_morrey_per_ball(space, values, phi_orlicz, phi_morrey, family)))


def indicator_bracket(space: FinitePointSpace, ball_index: int, orlicz: OrliczFunctionSpec,
                      phi: PhiFunctionSpec, family=None) -> dict:
    """
    공 B 의 지시함수에 대한 1/Φ^{-1}(φ(B)) ≤ ‖1_B‖ ≤ C/Φ^{-1}(φ(B))

    Returns:
        dict: lower, single_ball (B 하나로 된 집합 위의 노름), norm (전체 집합), C
    """
    fam = _family(space, family)
    member = fam.membership[ball_index]
    values = member.astype(float)
    _check_phi(space, phi)
    log_phi = float(phi.log_value(fam.log_radii[ball_index], fam.log_measures[ball_index],
                                  fam.centers[ball_index]))
    lower = 1.0 / float(orlicz.inverse(math.exp(log_phi)))
    single = BallFamily(fam.centers[[ball_index]], fam.log_radii[[ball_index]],
                        fam.membership[[ball_index]], fam.log_measures[[ball_index]])
    single_norm = orlicz_morrey_norm(space, values, orlicz, phi, single)
    norm = orlicz_morrey_norm(space, values, orlicz, phi, fam)
    return {"lower": lower, "single_ball": single_norm, "norm": norm, "C": norm / lower}


# --- 몫 노름 ---

@dataclass(frozen=True)
class QuotientResult:
    value: float
    minimizer: float
    certified: bool
    method: str

    def __iter__(self):
        return iter((self.value, self.minimizer))


def quotient_norm(sample: SampleLike, inner, space: Optional[FinitePointSpace] = None) -> QuotientResult:
    """
    inf_a ‖f + a‖

    볼록 노름이면 유계 Brent 탐색 후 국소 격자, 아니면 10⁴점 전역 격자를 먼저 훑습니다.
    a = 0 과 −f 의 값들은 항상 후보에 넣으므로 결과는 a = 0 의 값을 넘지 않습니다.
    """
    if isinstance(inner, QuotientSpec):
        raise InvalidInput("Quotient 안에 Quotient 를 둘 수 없습니다")
    if isinstance(sample, FinitePointSpace):
        raise InvalidInput("quotient_norm 에는 WeightedSample 을 넘기세요")
    values = sample.values

    def objective(a: float) -> float:
        return _evaluate(space, sample.with_values(values + a), inner)

    at_zero = objective(0.0)
    if sample.infinite_measure:
        # 무한 측도에서 상수 a ≠ 0 은 공간에 속하지 않음
        return QuotientResult(at_zero, 0.0, True, "infinite_measure")
    top = float(np.max(np.abs(values))) if sample.n else 0.0
    if top == 0.0:
        return QuotientResult(0.0, 0.0, True, "zero")

    evaluated = {0.0: at_zero}

    def consider(a: float) -> float:
        a = float(a)
        if a not in evaluated:
            evaluated[a] = objective(a)
        return evaluated[a]

    uniq = np.unique(values)
    if len(uniq) <= QUOTIENT_MAX_CANDIDATES:
        for v in uniq:
            consider(-v)

    convex = is_triangle_norm(inner)
    lo, hi = -top, top
    if not convex:
        grid = np.linspace(lo, hi, QUOTIENT_GLOBAL_GRID)
        vals = np.array([consider(a) for a in grid])
        k = int(np.argmin(vals))
        step = grid[1] - grid[0]
        lo, hi = max(-top, grid[k] - step), min(top, grid[k] + step)

    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * top, "maxiter": 500})
    evaluated[float(res.x)] = float(res.fun)

    best = min(evaluated, key=evaluated.get)
    span = (hi - lo) / 100.0
    for a in np.linspace(best - span, best + span, QUOTIENT_LOCAL_GRID):
        if -top <= a <= top:
            consider(a)
    best = min(evaluated, key=evaluated.get)
    logger.debug("quotient: 평가 %d회, a* = %.6g", len(evaluated), best)
    return QuotientResult(evaluated[best], best, convex, "brent" if convex else "grid+brent")


# --- Young 켤레 ---

def young_conjugate(phi: OrliczFunctionSpec, t_grid) -> OrliczFunctionSpec:
    """Φ̃(t) = sup_u (tu − Φ(u)), 로그 격자 최대화 후 국소 Brent 정밀화"""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise InvalidInput("t_grid 는 양의 순증가 격자여야 합니다")
    u = np.geomspace(1e-12, 1e12, 4801)
    with np.errstate(over="ignore", invalid="ignore"):
        phi_u = phi(u)
    out = np.empty(len(t_grid))
    for i, t in enumerate(t_grid):
        with np.errstate(invalid="ignore"):
            gain = t * u - phi_u
        gain = np.where(np.isnan(gain), -np.inf, gain)
        k = int(np.argmax(gain))
        a, b = u[max(k - 1, 0)], u[min(k + 1, len(u) - 1)]
        res = minimize_scalar(lambda x: -(t * x - float(phi(x))), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-14 * b})
        out[i] = max(float(gain[k]), -float(res.fun), 0.0)
    keep = out > 0
    if keep.sum() < 2:
        raise InvalidInput("켤레 함수가 양수인 격자점이 2개 미만입니다")
    if not keep.all():
        logger.info("young_conjugate: Φ̃ = 0 인 격자점 %d개 제외", int((~keep).sum()))
    lower = None
    upper = None
    if phi.kind in ("power", "power_scaled") and phi.p > 1:
        conj = phi.p / (phi.p - 1.0)
        lower = upper = conj
    return OrliczFunctionSpec.tabulated(t_grid[keep], out[keep], lower_type=lower, upper_type=upper)


# --- 분배기 ---

def _evaluate(space: Optional[FinitePointSpace], sample: WeightedSample, spec) -> float:
    if isinstance(spec, LpSpec):
        return lp_norm(sample, spec.p, spec.weight)
    if isinstance(spec, LInfSpec):
        return linf_norm(sample)
    if isinstance(spec, LorentzSpec):
        return lorentz_norm(sample, spec.r, spec.tau, spec.weight)
    if isinstance(spec, OrliczSpec):
        return luxemburg_norm(sample, spec.phi, spec.weight)
    if isinstance(spec, VariableLpSpec):
        return variable_lp_norm(sample, spec.exponent)
    if isinstance(spec, (MorreySpec, OrliczMorreySpec)):
        if space is None:
            raise SpecMismatch("Morrey형 노름은 공 구조가 있는 공간이 필요합니다")
        if isinstance(spec, MorreySpec):
            return morrey_norm(space, sample.values, spec.p, spec.phi, spec.family)
        return orlicz_morrey_norm(space, sample.values, spec.orlicz, spec.phi, spec.family)
    if isinstance(spec, QuotientSpec):
        return quotient_norm(sample, spec.inner, space).value
    raise SpecMismatch(f"알 수 없는 노름 명세: {type(spec).__name__}")


def evaluate_norm(space: SampleLike, values, spec) -> float:
    """노름 명세에 따라 해당 계산기로 보냄"""
    if isinstance(space, WeightedSample):
        sample = space if values is None else space.with_values(values)
        return _evaluate(None, sample, spec)
    return _evaluate(space, WeightedSample.from_space(space, values), spec)
