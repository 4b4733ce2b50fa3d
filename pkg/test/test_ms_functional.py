import math

import numpy as np
import pytest

from utils.errors import DiagonalOnly, InvalidInput, SOutOfRange, SpecMismatch
from utils.function_spaces import evaluate_norm
from utils.ms_functional import (
    ALL, DEFAULT_S_GRID, MSScanResult, RegionSpec, aitken, check_grid, classify_trend,
    dexp_series_oracle, gagliardo_kernel, gagliardo_profile, ms_scan, ms_value, parse_grid,
    reference_norm, sobolev_seminorm, tail_mass, thm1_bound,
)
from utils.norm_specs import LpSpec, QuotientSpec
from utils.scenarios import random_finite_space
from utils.space_core import build_finite_space, geometric_space

L1 = LpSpec(p=1.0)
L2 = LpSpec(p=2.0)


@pytest.fixture
def dexp_indicator(dexp):
    f = np.zeros(dexp.n_points)
    f[dexp.point_index("4")] = 1.0
    return f


# --- 이중지수 공간 ---

def test_dexp_reference_norm(dexp, dexp_indicator):
    assert evaluate_norm(dexp, dexp_indicator, L2) == pytest.approx(math.sqrt(2.0), rel=1e-14)


@pytest.mark.parametrize("s", [1e-1, 1e-3, 1e-5])
def test_dexp_kernel_matches_series(dexp, dexp_indicator, s):
    got = gagliardo_kernel(dexp, dexp_indicator, 1.0, s, "4")
    assert got == pytest.approx(dexp_series_oracle(s, 60), rel=1e-10)


def test_dexp_scan_vanishes(dexp, dexp_indicator):
    scan = ms_scan(dexp, dexp_indicator, 1.0, L2)
    assert scan.trend == "decreasing_to_zero"
    assert all(b < a for a, b in zip(scan.values, scan.values[1:]))
    assert ms_value(dexp, dexp_indicator, 1.0, L2, 1e-4) < 0.01
    assert scan.reference_norm == pytest.approx(math.sqrt(2.0))


def test_profile_matches_kernel(dexp, dexp_indicator):
    profile = gagliardo_profile(dexp, dexp_indicator, 1.0, 0.01)
    assert profile[3] == pytest.approx(gagliardo_kernel(dexp, dexp_indicator, 1.0, 0.01, 3), rel=1e-13)


# --- 영역 제한 ---

@pytest.mark.parametrize("radius", [0.1, 0.5, 1.2])
def test_region_additivity_finite(rng, radius):
    space = random_finite_space(rng, 16)
    f = rng.normal(size=16)
    whole = gagliardo_profile(space, f, 2.0, 0.3)
    inside = gagliardo_profile(space, f, 2.0, 0.3, RegionSpec(kind="inside_ball", radius=radius))
    outside = gagliardo_profile(space, f, 2.0, 0.3, RegionSpec(kind="outside_ball", radius=radius))
    assert np.allclose(inside + outside, whole, rtol=1e-12, atol=0)


def test_full_subset_equals_all(rng):
    space = random_finite_space(rng, 10)
    f = rng.normal(size=10)
    full = RegionSpec(kind="subset", points=list(range(10)))
    assert np.array_equal(gagliardo_profile(space, f, 1.0, 0.2, full), gagliardo_profile(space, f, 1.0, 0.2))


def test_region_spec_validation():
    with pytest.raises(ValueError):
        RegionSpec(kind="inside_ball")
    with pytest.raises(ValueError):
        RegionSpec(kind="outside_ball", radius=1.0, log2_radius=0.0)
    with pytest.raises(ValueError):
        RegionSpec(kind="subset")
    assert RegionSpec(kind="inside_ball", log2_radius=3.0).radius_value == pytest.approx(8.0)


def test_single_point_space_has_no_kernel():
    space = build_finite_space([[0.0]], [1.0])
    with pytest.raises(DiagonalOnly):
        gagliardo_profile(space, [1.0], 1.0, 0.5)


def test_s_and_q_checks(rng):
    space = random_finite_space(rng, 4)
    f = rng.normal(size=4)
    for s in (0.0, 1.0, -0.1):
        with pytest.raises(SOutOfRange):
            ms_value(space, f, 1.0, L1, s)
    with pytest.raises(InvalidInput):
        ms_value(space, f, 0.0, L1, 0.5)


def test_interval_space_requires_step_function(line):
    with pytest.raises(SpecMismatch):
        ms_value(line, [1.0, 2.0], 1.0, L1, 0.5)


# --- 유계 공간 상한 ---

def test_bounded_space_bound(rng):
    space = random_finite_space(rng, 16)
    f = rng.normal(size=16)
    semi = sobolev_seminorm(space, f, 1.0, 0.5, L1)
    for s in DEFAULT_S_GRID:
        assert ms_value(space, f, 1.0, L1, s) <= thm1_bound(space, f, 1.0, s, 0.5, L1, seminorm=semi) * (1 + 1e-12)
    with pytest.raises(InvalidInput):
        thm1_bound(space, f, 1.0, 0.6, 0.5, L1)
    assert ms_value(space, f, 1.0, L1, 1e-4) / ms_value(space, f, 1.0, L1, 1e-1) < 0.01


# --- 꼬리 질량 ---

@pytest.mark.parametrize("s", [1e-2, 1e-3, 1e-4])
def test_tail_mass_whole_line(line, s):
    assert tail_mass(line, 0.0, 1.0, s) == pytest.approx(s ** s, rel=1e-10)


def test_tail_mass_geometric_space_is_bounded_below():
    small, big = geometric_space(20), geometric_space(40)
    for s in (1e-2, 1e-3, 1e-4):
        a = tail_mass(small, small.labels[0], 1.0, s)
        b = tail_mass(big, big.labels[0], 1.0, s)
        assert a > 0.05
        assert a == pytest.approx(b, rel=0.1)


def test_tail_mass_dexp_decays(dexp):
    values = [tail_mass(dexp, "4", 1.0, s) for s in (1e-2, 1e-3, 1e-4)]
    assert values[0] > values[1] > values[2]


def test_series_oracle_checks_s():
    with pytest.raises(SOutOfRange):
        dexp_series_oracle(1.0)


# --- 스캔 ---

def test_classical_scan_bracket(line, indicator01):
    scan = ms_scan(line, indicator01, 1.0, L1)
    lo, hi = scan.ratio_bracket
    assert scan.bracket_contains(2.0, 0.01)
    assert (hi - lo) / lo < 0.05
    assert scan.trend == "bounded_bracket"
    frame = scan.to_frame()
    assert list(frame.columns) == ["s", "F", "ratio", "in_bracket", "trend"]
    assert len(frame) == len(DEFAULT_S_GRID)
    assert frame["in_bracket"].sum() == math.ceil(len(DEFAULT_S_GRID) / 2)


def test_scan_result_round_trips_through_json(line, indicator01):
    scan = ms_scan(line, indicator01, 1.0, QuotientSpec(inner=L1), s_grid=[0.5, 0.1, 0.01, 0.001])
    again = MSScanResult.model_validate_json(scan.model_dump_json())
    assert again == scan
    assert isinstance(again.spec, QuotientSpec)


def test_zero_function_scan(rng):
    space = random_finite_space(rng, 6)
    scan = ms_scan(space, np.zeros(6), 1.0, L1)
    assert scan.ratio_bracket == (0.0, 0.0)
    assert scan.trend == "inconclusive"
    assert reference_norm(space, np.zeros(6), L1) == 0.0


def test_grid_checks():
    with pytest.raises(InvalidInput):
        check_grid([0.1, 0.01, 0.001])
    with pytest.raises(InvalidInput):
        check_grid([0.1, 0.2, 0.01, 0.001])
    with pytest.raises(SOutOfRange):
        check_grid([1.5, 0.1, 0.01, 0.001])
    grid = parse_grid("1e-1:1e-5:9")
    assert len(grid) == 9
    assert grid[0] == pytest.approx(0.1) and grid[-1] == pytest.approx(1e-5)
    assert grid == pytest.approx(list(DEFAULT_S_GRID))
    with pytest.raises(InvalidInput):
        parse_grid("1e-1:1e-5")


@pytest.mark.parametrize("values, bracket, expected", [
    ([1.0, 0.5, 0.25, 0.1, 0.01], (0.0, 0.1), "decreasing_to_zero"),
    ([1.0, 1.3, 1.7, 2.2, 3.0], (1.7, 3.0), "increasing"),
    ([2.0, 2.01, 2.0, 2.0], (1.0, 1.01), "bounded_bracket"),
    ([2.0, 2.01, 2.0, 2.0], (0.01, 1.0), "inconclusive"),
    ([1.0, math.nan, 1.0, 1.0], (1.0, 1.0), "inconclusive"),
    ([1.0, 0.5, 0.25], (0.0, 0.1), "inconclusive"),
])
def test_classify_trend(values, bracket, expected):
    assert classify_trend(values, bracket) == expected


def test_aitken():
    fast = aitken([1.01, 1.005, 1.0025])
    assert fast.value == pytest.approx(1.0, rel=1e-12)
    assert fast.reliable
    slow = aitken([1.5, 1.25, 1.125])
    assert slow.value == pytest.approx(1.0, rel=1e-12)
    assert not slow.reliable
    assert not aitken([1.0, 2.0]).reliable
    constant = aitken([3.0, 3.0, 3.0])
    assert constant.value == 3.0 and constant.reliable


def test_default_region_is_all():
    assert ALL.kind == "all"
