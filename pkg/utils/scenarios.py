"""
재현 시나리오 레지스트리

이름이 붙은 계산 재현마다 기본 매개변수와 사전 등록한 기대값을 두고,
실행 결과를 ScenarioReport 로 돌려줍니다. 기대값 실패는 예외가 아니라 보고서에 기록됩니다.
"""

import logging
import math
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Any, Callable, Dict, List, Literal, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from dependencies import get_settings, parallel_map
from utils.conditions import check_wmd, check_wrd, doubling_profile
from utils.errors import InvalidInput, UnknownScenario
from utils.function_spaces import evaluate_norm
from utils.log_scalar import LogScalar, parse_float
from utils.ms_functional import (
    DEFAULT_S_GRID, dexp_series_oracle, gagliardo_kernel, ms_scan, ms_value, parse_grid,
    reference_norm, sobolev_seminorm, tail_mass, thm1_bound,
)
from utils.ms_line import exact_ms_step_1d
from utils.norm_specs import LpSpec, MaximalWeight
from utils.operators import (
    enumerate_ball_family, maximal_operator_norm, muckenhoupt_constant, rubio_de_francia,
)
from utils.quadrature import DEFAULT_RULE
from utils.rendering import render
from utils.space_core import (
    LN2, IntervalDomain1D, StepFunction1D, build_finite_space, double_exponential_space,
    geometric_space,
)

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
COARSE_S_GRID = (0.5, 0.1, 0.01, 0.001)
NAMED_GRIDS = {"default": DEFAULT_S_GRID, "coarse": COARSE_S_GRID}
COARSE_TOL = 0.02


class Expectation(BaseModel):
    description: str
    outcome: Literal["pass", "fail"]
    measured: Optional[str] = None


class ScenarioReport(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    name: str
    anchor: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    measured: Dict[str, Any] = Field(default_factory=dict)
    expectations: List[Expectation] = Field(default_factory=list)
    overall: Literal["pass", "fail"] = "pass"

    @model_validator(mode="after")
    def _overall(self):
        self.overall = "pass" if all(e.outcome == "pass" for e in self.expectations) else "fail"
        return self

    @property
    def passed(self) -> bool:
        return self.overall == "pass"

    def render_text(self) -> str:
        return render("scenario_report.jinja2", report=self)


def expect(description: str, ok: bool, measured: Optional[str] = None) -> Expectation:
    return Expectation(description=description, outcome="pass" if ok else "fail", measured=measured)


ScenarioFn = Callable[[SimpleNamespace], Tuple[Dict[str, Any], List[Expectation]]]


@dataclass(frozen=True)
class Scenario:
    name: str
    anchor: str
    fn: ScenarioFn
    defaults: Dict[str, Any] = field(default_factory=dict)


_REGISTRY: Dict[str, Scenario] = {}


def scenario(name: str, anchor: str, **defaults):
    """시나리오 등록 데코레이터"""
    def decorator(fn: ScenarioFn) -> ScenarioFn:
        _REGISTRY[name] = Scenario(name, anchor, fn, defaults)
        return fn
    return decorator


def list_scenarios() -> List[Dict[str, Any]]:
    return [{"name": s.name, "anchor": s.anchor, "defaults": _jsonable(s.defaults)}
            for s in sorted(_REGISTRY.values(), key=lambda s: s.name)]


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _coerce(key: str, default, raw):
    """--set key=value 문자열을 기본값의 타입에 맞춰 변환"""
    if not isinstance(raw, str):
        return raw
    try:
        if isinstance(default, bool):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(round(parse_float(raw)))
        if isinstance(default, float):
            return parse_float(raw)
        if isinstance(default, tuple):
            if raw in NAMED_GRIDS:
                return NAMED_GRIDS[raw]
            if raw.count(":") == 2:
                return tuple(parse_grid(raw))
            return tuple(parse_float(x) for x in raw.split(","))
    except ValueError:
        raise InvalidInput(f"{key} 값을 해석할 수 없습니다: {raw!r}")
    return raw


def run_scenario(name: str, overrides: Optional[Mapping[str, Any]] = None) -> ScenarioReport:
    """이름으로 시나리오를 실행 (같은 매개변수면 같은 보고서)"""
    if name not in _REGISTRY:
        raise UnknownScenario(f"등록되지 않은 시나리오: {name!r} (가능: {', '.join(sorted(_REGISTRY))})")
    entry = _REGISTRY[name]
    params = dict(entry.defaults)
    params.setdefault("seed", get_settings().seed)
    for key, raw in (overrides or {}).items():
        if key not in params:
            raise InvalidInput(f"{name} 에 없는 매개변수: {key}")
        params[key] = _coerce(key, params[key], raw)
    logger.info("시나리오 시작: %s", name)
    measured, expectations = entry.fn(SimpleNamespace(**params))
    report = ScenarioReport(name=name, anchor=entry.anchor, parameters=_jsonable(params),
                            measured=_jsonable(measured), expectations=expectations)
    logger.info("시나리오 종료: %s → %s", name, report.overall)
    return report


def run_all(overrides: Optional[Mapping[str, Any]] = None) -> List[ScenarioReport]:
    names = sorted(_REGISTRY)
    return parallel_map(lambda n: run_scenario(n, overrides), names)


# --- 공용 입력 ---

def lacunary_union(j_max: int) -> IntervalDomain1D:
    """Ω = ⋃_{j=1}^{j_max} (4^j, 4^j + 2^j)"""
    return IntervalDomain1D(intervals=[(4.0 ** j, 4.0 ** j + 2.0 ** j) for j in range(1, j_max + 1)])


def random_finite_space(rng: np.random.Generator, n_points: int):
    """단위 정사각형 위 무작위 점 (유클리드 거리), 질량 U(0.5, 2)"""
    pts = rng.random((n_points, 2))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(dist, 0.0)
    return build_finite_space(dist, rng.uniform(0.5, 2.0, n_points))


def random_step_function(rng: np.random.Generator, max_pieces: int = 4) -> StepFunction1D:
    n = int(rng.integers(1, max_pieces + 1))
    bp = np.sort(rng.uniform(-2.0, 2.0, n + 1))
    while np.any(np.diff(bp) < 1e-3):
        bp = np.sort(rng.uniform(-2.0, 2.0, n + 1))
    vals = rng.normal(size=n)
    vals = np.where(vals < 0, -1.0, 1.0) * np.maximum(np.abs(vals), 0.1)
    return StepFunction1D(breakpoints=[float(b) for b in bp], values=[float(v) for v in vals])


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


L1 = LpSpec(p=1.0)
L2 = LpSpec(p=2.0)


# --- 시나리오 ---

@scenario("classical_ms_indicator_1d",
          anchor="Maz'ya–Shaposhnikova formula: classical fractional Sobolev limit on the real line: "
                 "s·∬|f(x)−f(y)|/|x−y|^{1+s} → C‖f‖_{L¹}",
          s_points=(0.5, 0.1, 0.01), s_grid=DEFAULT_S_GRID, tol=0.01, width_tol=0.05)
def _classical(p):
    line = IntervalDomain1D.real_line()
    f = StepFunction1D.indicator(0.0, 1.0)
    tol = p.tol if len(p.s_grid) >= len(DEFAULT_S_GRID) else max(p.tol, COARSE_TOL)
    rows, out = [], []
    for s in p.s_points:
        value = ms_value(line, f, 1.0, L1, s)
        exact = exact_ms_step_1d(f, s, line)
        closed = 2.0 / (1.0 - s)
        rows.append({"s": s, "F": value, "exact": exact, "closed_form": closed})
        out.append(expect(f"|F(s)(1−s)/2 − 1| < {tol:g} at s = {s:g}",
                          abs(value * (1.0 - s) / 2.0 - 1.0) < tol, f"{value * (1.0 - s) / 2.0:.8f}"))
        out.append(expect(f"piece-pair oracle equals 2/(1−s) at s = {s:g}",
                          _rel(exact, closed) < 1e-12, f"{exact:.15g}"))
    scan = ms_scan(line, f, 1.0, L1, p.s_grid)
    lo, hi = scan.ratio_bracket
    out.append(expect("ratio bracket contains 2", scan.bracket_contains(2.0, tol), f"[{lo:.8g}, {hi:.8g}]"))
    out.append(expect(f"bracket relative width < {p.width_tol:g}", (hi - lo) / lo < p.width_tol,
                      f"{(hi - lo) / lo:.3g}"))
    return {"points": rows, "scan": scan.to_frame().to_dict(orient="records"), "tolerance": tol}, out


@scenario("thm1_bounded_finite",
          anchor="Theorem 1: on a bounded space s^{1/q}‖G_s^{1/q}‖_Y ≤ s^{1/q}·diam^{s0−s}·‖f‖_{W^{s0,q}_Y} → 0",
          n_spaces=10, n_points=16, q=1.0, s0=0.5, s_grid=DEFAULT_S_GRID, vanish_ratio=0.01)
def _thm1(p):
    rng = np.random.default_rng(p.seed)
    rows, out = [], []
    spec = L1
    for i in range(p.n_spaces):
        space = random_finite_space(rng, p.n_points)
        f = rng.normal(size=p.n_points)
        semi = sobolev_seminorm(space, f, p.q, p.s0, spec)
        scan = ms_scan(space, f, p.q, spec, p.s_grid)
        bounds = [thm1_bound(space, f, p.q, s, p.s0, spec, seminorm=semi) for s in scan.grid]
        worst = max(v / b for v, b in zip(scan.values, bounds))
        vanish = ms_value(space, f, p.q, spec, 1e-4) / ms_value(space, f, p.q, spec, 1e-1)
        rows.append({"space": i, "seminorm": semi, "trend": scan.trend,
                     "max_F_over_bound": worst, "F_1e-4_over_F_1e-1": vanish})
        out.append(expect(f"space {i}: F(s) ≤ bound on every grid point", worst <= 1.0 + 1e-12, f"{worst:.6g}"))
        out.append(expect(f"space {i}: trend decreasing_to_zero", scan.trend == "decreasing_to_zero", scan.trend))
        out.append(expect(f"space {i}: F(1e-4)/F(1e-1) < {p.vanish_ratio:g}", vanish < p.vanish_ratio,
                          f"{vanish:.3g}"))
    return {"spaces": rows}, out


@scenario("prop835_double_exponential",
          anchor="Proposition 835: double-exponential space {2^{2^k}}, f = 1_{4}: "
                 "‖f‖_{L²} = 2^{1/2} while the MS functional tends to 0",
          k_max=60, s_grid=DEFAULT_S_GRID, oracle_rtol=1e-10, small_s=1e-4, small_bound=0.01)
def _prop835(p):
    space = double_exponential_space(p.k_max)
    f = np.zeros(space.n_points)
    f[space.point_index("4")] = 1.0
    out = []
    norm = evaluate_norm(space, f, L2)
    out.append(expect("‖f‖_{L²} = √2", _rel(norm, math.sqrt(2.0)) < 1e-14, f"{norm:.17g}"))
    scan = ms_scan(space, f, 1.0, L2, p.s_grid)
    values = scan.values
    out.append(expect("F strictly decreasing over the grid", all(b < a for a, b in zip(values, values[1:]))))
    small = ms_value(space, f, 1.0, L2, p.small_s)
    out.append(expect(f"F({p.small_s:g}) < {p.small_bound:g}", small < p.small_bound, f"{small:.6g}"))
    kernel_rows = []
    for s in scan.grid:
        got = gagliardo_kernel(space, f, 1.0, s, "4")
        want = dexp_series_oracle(s, p.k_max)
        kernel_rows.append({"s": s, "kernel": got, "oracle": want, "rel_err": _rel(got, want)})
    worst = max(r["rel_err"] for r in kernel_rows)
    out.append(expect(f"kernel at 4 matches series oracle to {p.oracle_rtol:g}", worst < p.oracle_rtol,
                      f"{worst:.3g}"))
    tails = [{"s": s, "tail_mass": tail_mass(space, "4", 1.0, s)} for s in (1e-2, 1e-3, 1e-4)]
    out.append(expect("tail mass at 4 decays with s",
                      all(b["tail_mass"] < a["tail_mass"] for a, b in zip(tails, tails[1:]))))
    return {"norm": norm, "small_s_value": small, "scan": scan.to_frame().to_dict(orient="records"),
            "kernel": kernel_rows, "tail_mass": tails}, out


@scenario("prop1116_wrd_failure",
          anchor="Proposition 1116: double-exponential space is doubling (ratio ≤ 4) yet fails weak reverse doubling",
          k_max=40, lam=2.0, log2_r_lo=2.0, log2_r_hi=float(2 ** 39), n_samples=200, doubling_bound=4.0)
def _prop1116(p):
    space = double_exponential_space(p.k_max)
    rng = np.random.default_rng(p.seed)
    out = []
    window = (LogScalar.from_log2(p.log2_r_lo), LogScalar.from_log2(p.log2_r_hi))
    wrd = check_wrd(space, p.lam, window, base_point="4")
    out.append(expect("WRD window inf = 1", abs(wrd.window_inf - 1.0) < 1e-12, f"{wrd.window_inf:.12g}"))
    out.append(expect("WRD verdict fail", wrd.verdict == "fail", wrd.verdict))
    worst = 0.0
    for _ in range(p.n_samples):
        x = int(rng.integers(space.n_points))
        log2_r = 2.0 ** rng.uniform(0.0, p.k_max)
        report = doubling_profile(space, x, log_radii=[log2_r * LN2])
        worst = max(worst, report.ratios[0].ratio)
    out.append(expect(f"sampled doubling ratio ≤ {p.doubling_bound:g}",
                      worst <= p.doubling_bound * (1.0 + 1e-12), f"{worst:.6g}"))
    return {"wrd": wrd.model_dump(), "max_doubling_ratio": worst}, out


@scenario("prop1233_lacunary_union",
          anchor="Proposition 1233: Ω = ⋃(4^j, 4^j + 2^j) fails weak measure density; f = 1_{(4,6)} has ‖f‖_{L¹(Ω)} = 2 "
                 "but the MS functional on Ω tends to 0",
          j_max=30, j_lo=5, j_hi=20, s_grid=DEFAULT_S_GRID, s_check=1e-3, value_bound=0.05,
          quadrature_s=0.01, quadrature_tol=0.01)
def _prop1233(p):
    omega = lacunary_union(p.j_max)
    line = IntervalDomain1D.real_line()
    f = StepFunction1D.indicator(4.0, 6.0)
    out = []
    norm = reference_norm(omega, f, L1)
    out.append(expect("‖f‖_{L¹(Ω)} = 2", abs(norm - 2.0) < 1e-12, f"{norm:.17g}"))
    js = list(range(p.j_lo, p.j_hi + 1))
    wmd = check_wmd(line, omega.intervals, base_point=0.0, radii=[4.0 ** j + 2.0 ** j for j in js])
    ratios = wmd.ratio_values
    ok = all(r <= 2.0 ** (1 - j) * (1.0 + 1e-12) for r, j in zip(ratios, js))
    out.append(expect(f"WMD ratio ≤ 2^(1−J) at r = 4^J + 2^J, J = {p.j_lo}..{p.j_hi}", ok))
    out.append(expect("WMD verdict fail", wmd.verdict == "fail", wmd.verdict))
    values = parallel_map(lambda s: exact_ms_step_1d(f, s, omega), list(p.s_grid))
    at_check = exact_ms_step_1d(f, p.s_check, omega)
    out.append(expect(f"s·seminorm < {p.value_bound:g} at s = {p.s_check:g}", at_check < p.value_bound,
                      f"{at_check:.6g}"))
    out.append(expect("s·seminorm decreasing over the grid", all(b < a for a, b in zip(values, values[1:]))))
    quad = ms_value(omega, f, 1.0, L1, p.quadrature_s)
    exact = exact_ms_step_1d(f, p.quadrature_s, omega)
    out.append(expect(f"quadrature agrees with piece-pair oracle at s = {p.quadrature_s:g}",
                      _rel(quad, exact) < p.quadrature_tol, f"{_rel(quad, exact):.3g}"))
    return {"norm": norm, "wmd_ratios": [{"J": j, "ratio": float(r)} for j, r in zip(js, ratios)],
            "values": [{"s": s, "value": v} for s, v in zip(p.s_grid, values)], "value_at_check": at_check}, out


@scenario("weighted_twosided",
          anchor="Theorem 01011838: two-sided MS bounds in (weighted) Lebesgue spaces with ω ∈ A_{r/p}",
          n_functions=20, q_values=(1.0, 2.0), s_grid=DEFAULT_S_GRID, envelope_tol=50.0,
          weight_delta=0.5, refine_tol=0.1)
def _weighted(p):
    rng = np.random.default_rng(p.seed)
    line = IntervalDomain1D.real_line()
    fs = [random_step_function(rng) for _ in range(p.n_functions)]
    specs = {"L2": L2, "L2_weighted": LpSpec(p=2.0, weight=MaximalWeight(a=0.0, b=1.0, delta=p.weight_delta))}
    fine_rule = DEFAULT_RULE.refined()
    out, table = [], []
    for spec_name, spec in specs.items():
        for q in p.q_values:
            scans = parallel_map(lambda f: ms_scan(line, f, q, spec, p.s_grid), fs)
            los = [sc.ratio_bracket[0] for sc in scans]
            his = [sc.ratio_bracket[1] for sc in scans]
            envelope = max(his) / min(los) if min(los) > 0 else math.inf
            bounded = sum(sc.trend == "bounded_bracket" for sc in scans)
            # 모든 함수를 두 배 세밀한 규칙으로 다시 스캔해 포락선 상수 비교
            fine = parallel_map(lambda f: ms_scan(line, f, q, spec, p.s_grid, rule=fine_rule), fs)
            fine_lo = min(sc.ratio_bracket[0] for sc in fine)
            fine_hi = max(sc.ratio_bracket[1] for sc in fine)
            drift = max(_rel(fine_lo, min(los)), _rel(fine_hi, max(his)))
            table.append({"spec": spec_name, "q": q, "envelope_min": min(los), "envelope_max": max(his),
                          "envelope_ratio": envelope, "bounded": bounded,
                          "refined_min": fine_lo, "refined_max": fine_hi, "refine_drift": drift})
            label = f"{spec_name}, q = {q:g}"
            out.append(expect(f"{label}: every trend bounded_bracket", bounded == len(scans),
                              f"{bounded}/{len(scans)}"))
            out.append(expect(f"{label}: envelope ratio < {p.envelope_tol:g}", envelope < p.envelope_tol,
                              f"{envelope:.4g}"))
            out.append(expect(f"{label}: envelope constants within {p.refine_tol:g} under refinement ×2",
                              drift < p.refine_tol, f"{drift:.3g}"))
    return {"envelopes": table}, out


@scenario("rubio_properties",
          anchor="Lemma 3.7: Rubio de Francia iteration R g = Σ M^k g / (2‖M‖)^k: "
                 "|g| ≤ Rg, ‖Rg‖ ≤ 2‖g‖, [Rg]_{A1} ≤ 2‖M‖",
          n_spaces=20, n_points=8, n_g=50, k_max=40, p=2.0, a1_slack=1.05)
def _rubio(p):
    rng = np.random.default_rng(p.seed)
    spec = LpSpec(p=p.p)
    worst = {"pointwise": 0.0, "norm_ratio": 0.0, "a1_ratio": 0.0}
    for _ in range(p.n_spaces):
        space = random_finite_space(rng, p.n_points)
        fam = enumerate_ball_family(space)
        est = maximal_operator_norm(space, spec, trials=16, seed=p.seed, family=fam)
        m_norm = est.upper
        for _ in range(p.n_g):
            g = rng.normal(size=p.n_points)
            r = rubio_de_francia(space, g, spec, m_norm, p.k_max, family=fam, lower_estimate=est.lower)
            worst["pointwise"] = max(worst["pointwise"], float(np.max(np.abs(g) - r)))
            worst["norm_ratio"] = max(worst["norm_ratio"],
                                      evaluate_norm(space, r, spec) / evaluate_norm(space, g, spec))
            worst["a1_ratio"] = max(worst["a1_ratio"],
                                    muckenhoupt_constant(space, r, 1.0, fam) / (2.0 * m_norm))
    out = [
        expect("|g| ≤ Rg pointwise", worst["pointwise"] <= 0.0, f"{worst['pointwise']:.3g}"),
        expect("‖Rg‖ ≤ 2‖g‖", worst["norm_ratio"] <= 2.0, f"{worst['norm_ratio']:.6g}"),
        expect(f"[Rg]_A1 ≤ 2·m_norm·{p.a1_slack:g}", worst["a1_ratio"] <= p.a1_slack, f"{worst['a1_ratio']:.6g}"),
    ]
    return {"worst": worst}, out


@scenario("condition_gallery",
          anchor="Remark 2250(i): measure-condition classification: Euclidean spaces with A∞-weights satisfy doubling and "
                 "WRD, lacunary unions fail WMD",
          geometric_k_max=40, dexp_k_max=24)
def _gallery(p):
    line = IntervalDomain1D.real_line()
    weighted = IntervalDomain1D(intervals=[(-math.inf, math.inf)], whole_line=True, density_exponent=1.0)
    geo = geometric_space(p.geometric_k_max)
    dexp = double_exponential_space(p.dexp_k_max)
    cases = [
        ("lebesgue", "doubling", "pass", lambda: doubling_profile(line, 0.0)),
        ("lebesgue", "wrd", "pass", lambda: check_wrd(line, 2.0, (1e3, 1e6), 0.0)),
        ("power_weight_1", "doubling", "pass", lambda: doubling_profile(weighted, 0.0)),
        ("power_weight_1", "wrd", "pass", lambda: check_wrd(weighted, 2.0, (1e3, 1e6), 0.0)),
        ("geometric", "wrd", "pass",
         lambda: check_wrd(geo, 4.0, (16.0, 2.0 ** 30 - 2.0), geo.labels[0])),
        ("double_exponential", "wrd", "fail",
         lambda: check_wrd(dexp, 4.0, (LogScalar.from_log2(4.0), LogScalar.from_log2(2.0 ** 20)), "4")),
        ("half_line", "wmd", "pass", lambda: check_wmd(line, [(0.0, math.inf)], 0.0, (1e3, 1e6))),
        ("lacunary", "wmd", "fail",
         lambda: check_wmd(line, lacunary_union(30).intervals, 0.0, (4.0 ** 5, 4.0 ** 20))),
    ]
    rows, out = [], []
    for space_name, condition, wanted, run in cases:
        report = run()
        rows.append({"space": space_name, "condition": condition, "verdict": report.verdict,
                     "window_inf": report.window_inf, "expected": wanted})
        out.append(expect(f"{space_name}: {condition} {wanted}", report.verdict == wanted,
                          f"{report.verdict}, inf = {report.window_inf:.6g}"))
    return {"table": rows}, out
