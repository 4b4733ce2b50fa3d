"""
직선 위 계단함수의 MS 범함수 계산

안쪽 적분 G_s(x)는 조각마다 상수인 |f(x) − f(y)|^q 덕분에 모든 q에서 닫힌 형태이고,
바깥 적분은 조각 양 끝으로 기하적으로 조밀한 Gauss–Legendre 노드와 반직선 패널,
그리고 반직선마다 하나씩 두는 점근 꼬리 노드로 계산합니다.
U(x, y) = 2|x − y| (직선 Lebesgue 정규화)를 씁니다.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from utils.errors import InvalidInput, SEqualsOne, SOutOfRange, SpecMismatch
from utils.function_spaces import evaluate_norm
from utils.norm_specs import (
    LInfSpec, LorentzSpec, LpSpec, MaximalWeight, OrliczSpec, QuotientSpec,
)
from utils.quadrature import DEFAULT_RULE, QuadratureRule, _legendre, geometric_end_rule, ray_rule
from utils.space_core import IntervalDomain1D, StepFunction1D, WeightedSample, domain_pieces

logger = logging.getLogger(__name__)

PAIR_GL_NODES = 12
# 조각 사이 간격이 폭의 이 배수보다 크면 닫힌 형태 대신 텐서 GL
PAIR_SEPARATION = 2.0


def check_s(s: float) -> None:
    if not 0.0 < s < 1.0:
        raise SOutOfRange(f"s 는 (0, 1) 안에 있어야 합니다: {s}")


def _require_lebesgue(domain: IntervalDomain1D) -> None:
    if domain.density_exponent != 0.0:
        raise InvalidInput("1차원 MS 경로는 Lebesgue 측도 (density_exponent = 0) 에서만 지원합니다")


# --- 안쪽 적분 ---

def _tail_power_integral(lo, hi, sigma: float) -> np.ndarray:
    """∫_lo^hi t^{−1−σ} dt (0 < lo < hi ≤ ∞), 상쇄 없는 형태"""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        head = lo ** (-sigma) / sigma
        frac = -np.expm1(-sigma * np.log(hi / lo))
    frac = np.where(np.isinf(hi), 1.0, frac)
    return np.where(hi > lo, head * frac, 0.0)


def _clip_segments(a: float, b: float, xs: np.ndarray, region) -> List[Tuple[np.ndarray, np.ndarray]]:
    """x 마다 영역 제한을 적용한 y 구간 목록"""
    kind = "all" if region is None else region.kind
    if kind in ("all", "subset"):
        return [(np.full_like(xs, a), np.full_like(xs, b))]
    r = region.radius_value
    if kind == "inside_ball":
        return [(np.maximum(a, xs - r), np.minimum(b, xs + r))]
    return [(np.full_like(xs, a), np.minimum(b, xs - r)),
            (np.maximum(a, xs + r), np.full_like(xs, b))]


def _segment_integral(lo_y: np.ndarray, hi_y: np.ndarray, xs: np.ndarray, sigma: float) -> np.ndarray:
    """∫_{lo_y}^{hi_y} |x − y|^{−1−σ} dy, x 가 구간 밖에 있을 때"""
    valid = hi_y > lo_y
    right = xs <= lo_y
    left = xs >= hi_y
    t_lo = np.where(right, lo_y - xs, xs - hi_y)
    t_hi = np.where(right, hi_y - xs, xs - lo_y)
    ok = valid & (right | left) & (t_lo > 0)
    out = np.zeros_like(xs)
    if ok.any():
        out[ok] = _tail_power_integral(t_lo[ok], t_hi[ok], sigma)
    return out


def kernel_pieces(domain: IntervalDomain1D, f: StepFunction1D, region=None) -> List[Tuple[float, float, float]]:
    """y 적분에 쓰는 조각: Ω (subset 영역이면 Ω ∩ 부분집합) 위의 f 조각"""
    if region is not None and region.kind == "subset":
        sub = IntervalDomain1D(intervals=region.intervals_within(domain), whole_line=True)
        return domain_pieces(sub, f)
    return domain_pieces(domain, f)


def kernel_1d(domain: IntervalDomain1D, f: StepFunction1D, q: float, s: float, xs,
              region=None) -> np.ndarray:
    """G_s(x) = Σ_조각 |f(x) − c|^q ∫_조각 dy / (2|x − y|^{1+sq})"""
    check_s(s)
    _require_lebesgue(domain)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    sigma = s * q
    fx = f.evaluate(xs)
    total = np.zeros_like(xs)
    for a, b, c in kernel_pieces(domain, f, region):
        coef = np.abs(fx - c) ** q
        if not np.any(coef > 0):
            continue
        for lo_y, hi_y in _clip_segments(a, b, xs, region):
            total += coef * _segment_integral(lo_y, hi_y, xs, sigma)
    return 0.5 * total


def tail_mass_1d(domain: IntervalDomain1D, x: float, q: float, s: float) -> float:
    """s·∫_{Ω \\ B(x, s^{−1/q})} dy / (2|x − y|^{1+sq})"""
    check_s(s)
    _require_lebesgue(domain)
    r = s ** (-1.0 / q)
    xs = np.array([float(x)])
    total = 0.0
    for a, b in domain.intervals:
        for lo_y, hi_y in ((np.array([a]), np.minimum(b, xs - r)), (np.maximum(a, xs + r), np.array([b]))):
            total += float(_segment_integral(lo_y, hi_y, xs, s * q)[0])
    return s * 0.5 * total


# --- 바깥 적분 ---

def _support_stats(domain: IntervalDomain1D, f: StepFunction1D, q: float) -> Tuple[float, float, float]:
    """(m_q = ∫_Ω |f|^q, |f|^q 의 무게중심, 지지 구간 폭)"""
    mass, moment = 0.0, 0.0
    for a, b, c in domain_pieces(domain, f):
        if c == 0.0 or math.isinf(a) or math.isinf(b):
            continue
        w = abs(c) ** q
        mass += w * (b - a)
        moment += w * 0.5 * (b * b - a * a)
    lo, hi = f.support
    return mass, (moment / mass if mass > 0 else 0.5 * (lo + hi)), max(hi - lo, 0.0)


def outer_exponent(spec) -> Optional[Tuple[float, float]]:
    """
    바깥 노름의 (p, 가중치 감쇠 지수 δ); 꼬리 노드가 필요 없으면 None

    꼬리 질량은 L^p형 모듈러 ∫ ω |G|^{p/q} 의 점근형을 정확히 맞추도록 정합니다.
    """
    if isinstance(spec, QuotientSpec):
        return outer_exponent(spec.inner)
    if isinstance(spec, LInfSpec):
        return None
    weight = getattr(spec, "weight", None)
    if weight is not None and not isinstance(weight, MaximalWeight):
        raise SpecMismatch("1차원 MS 경로의 가중치는 maximal_indicator 형태여야 합니다")
    delta = weight.delta if isinstance(weight, MaximalWeight) else 0.0
    if isinstance(spec, LpSpec):
        return spec.p, delta
    if isinstance(spec, LorentzSpec):
        return spec.r, delta
    if isinstance(spec, OrliczSpec):
        return (spec.phi.p if spec.phi.kind in ("power", "power_scaled") else 1.0), delta
    raise SpecMismatch(f"1차원 MS 경로는 {type(spec).__name__} 바깥 노름을 지원하지 않습니다")


def outer_rule(domain: IntervalDomain1D, f: StepFunction1D, rule: QuadratureRule = DEFAULT_RULE):
    """
    바깥 적분 노드

    Returns:
        (노드, 가중치, 반직선 목록 [(시작점, 방향, far)])
    """
    _, _, width = _support_stats(domain, f, 1.0)
    scale = width if width > 0 else 1.0
    far = rule.far_radius_factor * scale
    nodes, weights, rays = [], [], []
    for a, b, _ in domain_pieces(domain, f):
        if math.isinf(a) and math.isinf(b):
            raise InvalidInput("양쪽이 모두 무한한 조각은 f 가 0 이 아닐 때 생길 수 없습니다")
        if math.isinf(b):
            x, w = ray_rule(a, +1, rule.min_panel_factor * scale, far, rule)
            rays.append((a, +1, far))
        elif math.isinf(a):
            x, w = ray_rule(b, -1, rule.min_panel_factor * scale, far, rule)
            rays.append((b, -1, far))
        else:
            x, w = geometric_end_rule(a, b, rule.min_panel_factor * (b - a), rule)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights), rays


def ms_sample_1d(domain: IntervalDomain1D, f: StepFunction1D, q: float, spec, s: float,
                 region=None, rule: QuadratureRule = DEFAULT_RULE) -> WeightedSample:
    """G_s^{1/q} 를 바깥 노드 위에 올린 가중 표본 (반직선마다 점근 꼬리 노드 포함)"""
    check_s(s)
    _require_lebesgue(domain)
    xs, ws, rays = outer_rule(domain, f, rule)
    g = kernel_1d(domain, f, q, s, xs, region)
    exponent = outer_exponent(spec)
    m_q, center, _ = _support_stats(domain, f, q)
    tail_x, tail_w, tail_g = [], [], []
    inside_only = region is not None and region.kind == "inside_ball"
    if exponent is not None and rays and m_q > 0 and not inside_only:
        p, delta = exponent
        e = p * (1.0 + s * q) / q + delta
        if e <= 1.0:
            raise SpecMismatch(f"G_s^(1/q) 가 바깥 노름에서 무한합니다 (감쇠 지수 {e:.3g} ≤ 1)")
        weight = getattr(spec.inner if isinstance(spec, QuotientSpec) else spec, "weight", None)
        for start, direction, far in rays:
            y = start + direction * far
            r_far = abs(y - center)
            gy = float(kernel_1d(domain, f, q, s, [y], region)[0])
            if gy <= 0:
                continue
            wy = float(weight.evaluate([y])[0]) if isinstance(weight, MaximalWeight) else 1.0
            w_scale = (weight.b - weight.a) ** weight.delta if isinstance(weight, MaximalWeight) else 1.0
            tail = (0.5 * m_q) ** (p / q) * w_scale * r_far ** (1.0 - e) / (e - 1.0)
            tail_x.append(y)
            tail_g.append(gy)
            tail_w.append(tail / (wy * gy ** (p / q)))
    if tail_x:
        xs = np.concatenate([xs, tail_x])
        ws = np.concatenate([ws, tail_w])
        g = np.concatenate([g, tail_g])
    logger.debug("ms_sample_1d: s=%.3g 노드 %d개 (꼬리 %d개)", s, len(xs), len(tail_x))
    return WeightedSample(g ** (1.0 / q), np.log(ws), infinite_measure=bool(rays), coordinates=xs)


def ms_value_1d(domain: IntervalDomain1D, f: StepFunction1D, q: float, spec, s: float,
                region=None, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """F(s) = s^{1/q}‖G_s^{1/q}‖_Y"""
    check_s(s)
    if f.is_zero:
        return 0.0
    sample = ms_sample_1d(domain, f, q, spec, s, region, rule)
    return s ** (1.0 / q) * evaluate_norm(sample, None, spec)


# --- 닫힌 형태 기준값 ---

def _pow_step(u: float, w: float, e: float) -> float:
    """(u + w)^e − u^e, u ≥ 0"""
    if u == 0.0:
        return w ** e
    return u ** e * math.expm1(e * math.log1p(w / u))


def piece_pair_integral(a: float, b: float, c: float, d: float, s: float) -> float:
    """∫_a^b ∫_c^d (y − x)^{−1−s} dy dx, b ≤ c"""
    e = 1.0 - s
    if math.isinf(a) and math.isinf(d):
        raise InvalidInput("두 조각이 모두 무한하면 적분이 발산합니다")
    gap = c - b
    if math.isinf(a):
        return _pow_step(gap, d - c, e) / (s * e)
    if math.isinf(d):
        return _pow_step(gap, b - a, e) / (s * e)
    w1, w2 = b - a, d - c
    if gap > PAIR_SEPARATION * max(w1, w2):
        x, w = _legendre(PAIR_GL_NODES)
        xs = a + 0.5 * w1 * (x + 1.0)
        ys = c + 0.5 * w2 * (x + 1.0)
        kern = (ys[None, :] - xs[:, None]) ** (-1.0 - s)
        return float(0.25 * w1 * w2 * (w @ kern @ w))
    terms = (c - a) ** e - (gap ** e if gap > 0 else 0.0) - (d - a) ** e + (d - b) ** e
    return terms / (s * e)


def exact_ms_step_1d(f: StepFunction1D, s: float, domain: IntervalDomain1D) -> float:
    """
    s·∬_{Ω×Ω} |f(x) − f(y)| / (2|x − y|^{1+s}) dy dx (q = 1, L¹ 바깥 노름)

    조각 쌍마다 닫힌 형태 반복 적분을 더합니다.
    """
    if s == 1.0:
        raise SEqualsOne("s = 1 에서 원시함수가 퇴화합니다")
    check_s(s)
    _require_lebesgue(domain)
    pieces = domain_pieces(domain, f)
    total = 0.0
    for i, (a, b, ci) in enumerate(pieces):
        for c, d, cj in pieces[i + 1:]:
            jump = abs(ci - cj)
            if jump == 0.0:
                continue
            total += jump * piece_pair_integral(a, b, c, d, s)
    # 대칭 순서쌍 2배와 U = 2|x−y| 의 1/2 이 상쇄
    return s * total
