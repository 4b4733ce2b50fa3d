import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from utils.ball_family import BallFamily, enumerate_ball_family
from utils.errors import InvalidInput, LengthMismatch, NonpositiveWeight, SpecMismatch
from utils.function_spaces import (
    decreasing_rearrangement, evaluate_norm, indicator_bracket, log_holder_constants, lorentz_norm,
    lp_norm, luxemburg_norm, morrey_norm, orlicz_morrey_norm, quotient_norm, variable_lp_norm,
    young_conjugate,
)
from utils.norm_specs import (
    LInfSpec, LorentzSpec, LpSpec, MaximalWeight, OrliczFunctionSpec, OrliczSpec,
    PhiFunctionSpec, QuotientSpec, VariableLpSpec, parse_norm_spec,
)
from utils.space_core import WeightedSample, euclidean_nodes_space

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
exponents = st.sampled_from([1.0, 1.5, 2.0, 3.0])


def random_sample(seed, n=10):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=n) * (rng.random(n) < 0.8)
    values[0] = 1.0 + rng.random()
    return WeightedSample.from_masses(values, rng.uniform(0.2, 3.0, n))


def random_nodes(seed, n=8):
    rng = np.random.default_rng(seed)
    coords = np.sort(rng.uniform(-5.0, 5.0, n))
    while np.any(np.diff(coords) < 1e-6):
        coords = np.sort(rng.uniform(-5.0, 5.0, n))
    space = euclidean_nodes_space(coords, rng.uniform(0.2, 3.0, n))
    values = rng.normal(size=n)
    return space, values


# --- 교차 검증 ---

@settings(max_examples=100, deadline=None)
@given(seeds, exponents)
def test_lorentz_pp_equals_lp(seed, p):
    sample = random_sample(seed)
    assert lorentz_norm(sample, p, p) == pytest.approx(lp_norm(sample, p), rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(seeds, exponents)
def test_luxemburg_power_equals_lp(seed, p):
    sample = random_sample(seed)
    assert luxemburg_norm(sample, OrliczFunctionSpec.power(p)) == pytest.approx(lp_norm(sample, p), rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(seeds, exponents)
def test_constant_variable_exponent_equals_lp(seed, p):
    sample = random_sample(seed)
    assert variable_lp_norm(sample, np.full(sample.n, p)) == pytest.approx(lp_norm(sample, p), rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(seeds, exponents)
def test_morrey_measure_power_equals_lp(seed, p):
    space, values = random_nodes(seed)
    got = morrey_norm(space, values, p, PhiFunctionSpec.measure_power(p))
    assert got == pytest.approx(evaluate_norm(space, values, LpSpec(p=p)), rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(seeds, exponents)
def test_orlicz_morrey_power_reduces_to_morrey(seed, p):
    space, values = random_nodes(seed)
    phi = PhiFunctionSpec.power(lam=0.5, p=p)
    fam = enumerate_ball_family(space)
    morrey = morrey_norm(space, values, p, phi, fam)
    om = orlicz_morrey_norm(space, values, OrliczFunctionSpec.power(p), phi.raised(p), fam)
    assert om == pytest.approx(morrey, rel=1e-8)


# --- 노름 공리 ---

def _all_norms(sample):
    return [
        lp_norm(sample, 2.0),
        lp_norm(sample, 0.5),
        lorentz_norm(sample, 2.0, 1.0),
        luxemburg_norm(sample, OrliczFunctionSpec.exp_minus_one()),
        variable_lp_norm(sample, np.linspace(1.0, 3.0, sample.n)),
    ]


@settings(max_examples=100, deadline=None)
@given(seeds, st.floats(min_value=-20.0, max_value=20.0).filter(lambda c: abs(c) > 1e-3))
def test_homogeneity(seed, c):
    sample = random_sample(seed)
    scaled = sample.with_values(c * sample.values)
    for got, base in zip(_all_norms(scaled), _all_norms(sample)):
        assert got == pytest.approx(abs(c) * base, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_lattice_property(seed):
    sample = random_sample(seed)
    rng = np.random.default_rng(seed + 1)
    smaller = sample.with_values(sample.values * rng.uniform(-1.0, 1.0, sample.n))
    for g, f in zip(_all_norms(smaller), _all_norms(sample)):
        assert g <= f * (1.0 + 1e-11)


def test_rearrangement_preserves_integral():
    sample = WeightedSample.from_masses([3.0, -1.0, 3.0, 0.5, 0.0], [1.0, 2.0, 0.5, 1.5, 1.0])
    rea = decreasing_rearrangement(sample)
    assert rea.levels.tolist() == [3.0, 1.0, 0.5, 0.0]
    assert rea.lp_integral(2.0) == pytest.approx(np.sum(sample.values ** 2 * sample.masses), rel=1e-12)
    assert rea.total_mass == pytest.approx(6.0)
    assert rea([0.1, 1.6, 5.9]).tolist() == [3.0, 1.0, 0.0]


def test_luxemburg_modular_at_result():
    sample = random_sample(11)
    phi = OrliczFunctionSpec.exp_minus_one()
    lam = luxemburg_norm(sample, phi)
    modular = float(np.sum(phi(np.abs(sample.values) / lam) * sample.masses))
    assert 1.0 - 1e-10 <= modular <= 1.0


def test_weighted_norms():
    sample = WeightedSample.from_masses([1.0, 2.0], [1.0, 1.0])
    assert lp_norm(sample, 1.0, weight=[2.0, 0.5]) == pytest.approx(3.0)
    with pytest.raises(NonpositiveWeight):
        lp_norm(sample, 1.0, weight=[1.0, 0.0])
    with pytest.raises(LengthMismatch):
        lp_norm(sample, 1.0, weight=[1.0])
    with pytest.raises(SpecMismatch):
        lp_norm(sample, 1.0, weight=MaximalWeight(a=0.0, b=1.0))


def test_maximal_weight_closed_form():
    w = MaximalWeight(a=0.0, b=1.0, delta=0.5)
    assert w.evaluate([0.5, 3.0, -1.0]).tolist() == pytest.approx([1.0, (1 / 3) ** 0.5, 0.5 ** 0.5])


def test_quotient_norm_median():
    sample = WeightedSample.from_masses([0.0, 1.0], [1.0, 1.0])
    result = quotient_norm(sample, LpSpec(p=1.0))
    assert result.value == pytest.approx(1.0, rel=1e-10)
    assert -1.0 <= result.minimizer <= 0.0
    assert result.certified


def test_quotient_norm_never_exceeds_norm():
    sample = random_sample(5)
    for inner in (LpSpec(p=2.0), LpSpec(p=0.5), LInfSpec()):
        assert quotient_norm(sample, inner).value <= evaluate_norm(sample, None, inner) * (1.0 + 1e-12)


def test_quotient_on_infinite_measure_is_norm():
    sample = WeightedSample(np.array([1.0, 2.0]), np.zeros(2), infinite_measure=True)
    result = quotient_norm(sample, LpSpec(p=2.0))
    assert result.minimizer == 0.0
    assert result.value == pytest.approx(5.0 ** 0.5)


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_young_conjugate_of_scaled_power(p):
    t = np.geomspace(0.1, 10.0, 21)
    conj = young_conjugate(OrliczFunctionSpec.power_scaled(p), t)
    p_dual = p / (p - 1.0)
    assert np.allclose(conj(t), t ** p_dual / p_dual, rtol=1e-6, atol=0)
    assert conj.lower_type == pytest.approx(p_dual)


def test_indicator_bracket():
    space, _ = random_nodes(3)
    orlicz = OrliczFunctionSpec.power(2.0)
    phi = PhiFunctionSpec.measure_power(2.0).raised(2.0)
    fam = enumerate_ball_family(space)
    for i in (0, fam.n_balls // 2, fam.n_balls - 1):
        out = indicator_bracket(space, i, orlicz, phi, fam)
        assert out["lower"] <= out["norm"] * (1.0 + 1e-10)
        assert out["single_ball"] == pytest.approx(out["lower"], rel=1e-9)
        assert out["C"] >= 1.0 - 1e-10


def test_log_holder_constants_of_constant_exponent():
    space, _ = random_nodes(4)
    out = log_holder_constants(space, np.full(space.n_points, 2.0))
    assert out["c_log"] == 0.0 and out["c_inf"] == 0.0
    assert out["r_min"] == out["r_max"] == 2.0


def test_orlicz_type_checks():
    assert OrliczFunctionSpec.power(2.0).check_types()
    assert OrliczFunctionSpec.exp_minus_one().check_types()
    bad = OrliczFunctionSpec(kind="power", p=2.0, lower_type=3.0)
    assert not bad.check_types()


def test_dispatch_and_spec_parsing():
    sample = random_sample(9)
    spec = parse_norm_spec({"type": "orlicz", "phi": {"kind": "power", "p": 2.0}})
    assert isinstance(spec, OrliczSpec)
    assert evaluate_norm(sample, None, spec) == pytest.approx(lp_norm(sample, 2.0), rel=1e-8)
    assert evaluate_norm(sample, None, LorentzSpec(r=2.0, tau=2.0)) == pytest.approx(lp_norm(sample, 2.0))
    assert evaluate_norm(sample, None, VariableLpSpec(exponent=[2.0] * sample.n)) == pytest.approx(
        lp_norm(sample, 2.0), rel=1e-8)
    with pytest.raises(InvalidInput):
        parse_norm_spec({"type": "lp", "p": -1})
    with pytest.raises(InvalidInput):
        parse_norm_spec({"type": "quotient", "inner": {"type": "quotient", "inner": {"type": "linf"}}})
    with pytest.raises(SpecMismatch):
        evaluate_norm(sample, None, parse_norm_spec({"type": "morrey", "p": 1, "phi": {}}))
    assert isinstance(parse_norm_spec({"type": "quotient", "inner": {"type": "lp", "p": 1}}), QuotientSpec)


# --- Morrey / Orlicz–Morrey / 몫 노름 ---

def _ball_norms(space, values, fam):
    phi = PhiFunctionSpec.power(lam=0.5, p=2.0)
    return [
        morrey_norm(space, values, 2.0, phi, fam),
        morrey_norm(space, values, 1.0, PhiFunctionSpec.measure_power(1.0), fam),
        orlicz_morrey_norm(space, values, OrliczFunctionSpec.power(2.0), phi.raised(2.0), fam),
        orlicz_morrey_norm(space, values, OrliczFunctionSpec.exp_minus_one(), phi, fam),
    ]


@settings(max_examples=20, deadline=None)
@given(seeds, st.floats(min_value=-20.0, max_value=20.0).filter(lambda c: abs(c) > 1e-3))
def test_ball_norm_homogeneity(seed, c):
    space, values = random_nodes(seed)
    fam = enumerate_ball_family(space)
    for got, base in zip(_ball_norms(space, c * values, fam), _ball_norms(space, values, fam)):
        assert got == pytest.approx(abs(c) * base, rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_ball_norm_lattice_property(seed):
    space, values = random_nodes(seed)
    fam = enumerate_ball_family(space)
    smaller = values * np.random.default_rng(seed + 1).uniform(-1.0, 1.0, space.n_points)
    for g, f in zip(_ball_norms(space, smaller, fam), _ball_norms(space, values, fam)):
        assert g <= f * (1.0 + 1e-8)


def test_fatou_on_truncations():
    space, values = random_nodes(21)
    fam = enumerate_ball_family(space)
    sample = WeightedSample.from_space(space, values)
    top = float(np.max(np.abs(values)))
    levels = np.linspace(0.1, 1.0, 10) * top
    seq = []
    for m in levels:
        cut = np.minimum(np.abs(values), m)
        seq.append(_all_norms(sample.with_values(cut)) + _ball_norms(space, cut, fam))
    limit = _all_norms(sample.with_values(np.abs(values))) + _ball_norms(space, values, fam)
    for prev, cur in zip(seq, seq[1:]):
        assert all(b >= a * (1.0 - 1e-8) for a, b in zip(prev, cur))
    assert seq[-1] == pytest.approx(limit, rel=1e-8)


def test_morrey_grows_with_ball_family():
    space, values = random_nodes(13)
    full = enumerate_ball_family(space)
    phi = PhiFunctionSpec.power(lam=0.5, p=2.0)
    orlicz = OrliczFunctionSpec.power(2.0)
    for step in (2, 3, 5):
        sub = BallFamily.from_balls(space, full.balls[::step])
        assert sub.n_balls < full.n_balls
        assert morrey_norm(space, values, 2.0, phi, sub) <= (
            morrey_norm(space, values, 2.0, phi, full) * (1.0 + 1e-12))
        om_sub = orlicz_morrey_norm(space, values, orlicz, phi.raised(2.0), sub)
        assert om_sub <= orlicz_morrey_norm(space, values, orlicz, phi.raised(2.0), full) * (1.0 + 1e-8)


@pytest.mark.parametrize("inner", [LpSpec(p=2.0), LpSpec(p=0.5), LInfSpec()])
@pytest.mark.parametrize("c", [-3.0, 0.25, 7.0])
def test_quotient_homogeneity(inner, c):
    sample = random_sample(17)
    base = quotient_norm(sample, inner).value
    scaled = quotient_norm(sample.with_values(c * sample.values), inner).value
    assert scaled == pytest.approx(abs(c) * base, rel=1e-6)


@pytest.mark.parametrize("inner", [LpSpec(p=2.0), LpSpec(p=0.5), LInfSpec()])
def test_quotient_ignores_constant_shift(inner):
    sample = random_sample(19)
    base = quotient_norm(sample, inner).value
    for shift in (-2.0, 0.5, 4.0):
        shifted = quotient_norm(sample.with_values(sample.values + shift), inner).value
        assert shifted == pytest.approx(base, rel=1e-6)


def test_quotient_is_not_a_lattice_norm():
    # |g| ≤ |f| 이어도 f 가 상수면 몫 노름은 0
    f = WeightedSample.from_masses([2.0, 2.0, 2.0], [1.0, 1.0, 1.0])
    g = f.with_values(np.array([2.0, 0.0, 1.0]))
    assert quotient_norm(f, LpSpec(p=1.0)).value == pytest.approx(0.0, abs=1e-12)
    assert quotient_norm(g, LpSpec(p=1.0)).value > 1.0


def test_per_point_small_radius_exponent():
    space, values = random_nodes(23)
    fam = enumerate_ball_family(space)
    n = space.n_points
    lams = np.linspace(0.2, 0.8, n)
    uniform = PhiFunctionSpec.power(lam=0.5, p=2.0, lam_small=[0.3] * n)
    scalar = PhiFunctionSpec.power(lam=0.5, p=2.0, lam_small=0.3)
    assert morrey_norm(space, values, 2.0, uniform, fam) == pytest.approx(
        morrey_norm(space, values, 2.0, scalar, fam), rel=1e-12)
    mixed = PhiFunctionSpec.power(lam=0.5, p=2.0, lam_small=lams)
    assert mixed.per_point and not scalar.per_point
    got = morrey_norm(space, values, 2.0, mixed, fam)
    ends = [morrey_norm(space, values, 2.0, PhiFunctionSpec.power(lam=0.5, p=2.0, lam_small=v), fam)
            for v in (0.2, 0.8)]
    assert min(ends) * (1.0 - 1e-12) <= got <= max(ends) * (1.0 + 1e-12)
    assert mixed.doubling_constant() == pytest.approx(max(
        PhiFunctionSpec.power(lam=0.5, p=2.0, lam_small=v).doubling_constant() for v in lams))
    with pytest.raises(LengthMismatch):
        morrey_norm(space, values, 2.0, PhiFunctionSpec.power(lam=0.5, p=2.0, lam_small=[0.3] * (n - 1)), fam)
    with pytest.raises(InvalidInput):
        mixed.log_value(-2.0, 0.0)
