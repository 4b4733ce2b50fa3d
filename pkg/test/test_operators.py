import numpy as np
import pytest

from utils.ball_family import BallFamily, enumerate_ball_family, full_space_family
from utils.errors import InvalidInput, InvalidOperatorNorm, NonpositiveWeight, UncoveredPoint
from utils.function_spaces import evaluate_norm
from utils.norm_specs import LInfSpec, LpSpec
from utils.operators import (
    maximal_function, maximal_operator_norm, muckenhoupt_constant, rubio_de_francia,
    schur_upper_bound, weight_dilation_check,
)
from utils.scenarios import random_finite_space

L2 = LpSpec(p=2.0)


@pytest.fixture
def space(rng):
    return random_finite_space(rng, 8)


def test_canonical_family_covers_and_contains_whole_space(space):
    fam = enumerate_ball_family(space)
    assert fam.covers()
    assert fam.membership.all(axis=1).any()
    assert full_space_family(space).membership.all()


def test_maximal_function_dominates(space, rng):
    f = rng.normal(size=space.n_points)
    mf = maximal_function(space, f)
    assert np.all(mf >= np.abs(f) * (1.0 - 1e-12))
    # 전체 공이 있으므로 Mf ≥ 전체 평균
    mean = np.sum(np.abs(f) * np.exp(space.log_masses)) / np.exp(space.log_masses).sum()
    assert np.all(mf >= mean * (1.0 - 1e-12))


def test_maximal_function_requires_cover(space):
    tiny = BallFamily.from_balls(space, [(0, -50.0)])
    with pytest.raises(UncoveredPoint):
        maximal_function(space, np.ones(space.n_points), tiny)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_muckenhoupt_of_constant_weight(space, p):
    assert muckenhoupt_constant(space, np.ones(space.n_points), p) == pytest.approx(1.0, rel=1e-12)


def test_muckenhoupt_at_least_one(space, rng):
    w = rng.uniform(0.1, 10.0, space.n_points)
    assert muckenhoupt_constant(space, w, 2.0) >= 1.0 - 1e-12
    assert muckenhoupt_constant(space, w, 1.0) >= muckenhoupt_constant(space, w, 2.0) * (1.0 - 1e-12)
    with pytest.raises(NonpositiveWeight):
        muckenhoupt_constant(space, np.zeros(space.n_points), 1.0)
    with pytest.raises(InvalidInput):
        muckenhoupt_constant(space, w, 0.5)


def test_muckenhoupt_monotone_in_p(space, rng):
    fam = enumerate_ball_family(space)
    for _ in range(50):
        w = np.exp(rng.normal(scale=1.5, size=space.n_points))
        consts = [muckenhoupt_constant(space, w, p, fam) for p in (1.0, 1.5, 2.0, 3.0)]
        assert all(b <= a * (1.0 + 1e-10) for a, b in zip(consts, consts[1:]))


def test_maximal_weight_bounded_by_a1_constant(space, rng):
    fam = enumerate_ball_family(space)
    for _ in range(20):
        w = rng.uniform(0.5, 2.0, space.n_points)
        a1 = muckenhoupt_constant(space, w, 1.0, fam)
        assert np.all(maximal_function(space, w, fam) <= a1 * w * (1.0 + 1e-12))


def test_operator_norm_bounds(space):
    est = maximal_operator_norm(space, L2, trials=16, seed=1)
    assert 1.0 <= est.lower <= est.upper
    assert est.upper >= schur_upper_bound(space) * (1.0 - 1e-12)
    assert tuple(maximal_operator_norm(space, LInfSpec())) == (1.0, 1.0)


def test_rubio_de_francia_properties(space, rng):
    fam = enumerate_ball_family(space)
    est = maximal_operator_norm(space, L2, trials=16, seed=2, family=fam)
    for _ in range(10):
        g = rng.normal(size=space.n_points)
        r = rubio_de_francia(space, g, L2, est.upper, family=fam, lower_estimate=est.lower)
        assert np.all(np.abs(g) <= r)
        assert evaluate_norm(space, r, L2) <= 2.0 * evaluate_norm(space, g, L2)
        assert muckenhoupt_constant(space, r, 1.0, fam) <= 2.0 * est.upper * 1.05


def test_rubio_de_francia_rejects_bad_norm(space):
    g = np.ones(space.n_points)
    with pytest.raises(InvalidOperatorNorm):
        rubio_de_francia(space, g, L2, 0.5)
    with pytest.raises(InvalidOperatorNorm):
        rubio_de_francia(space, g, L2, float("inf"))
    with pytest.raises(InvalidInput):
        rubio_de_francia(space, g, L2, 10.0, k_max=4)


def test_weight_dilation_of_constant_weight(space):
    assert weight_dilation_check(space, np.ones(space.n_points), 1.0) <= 1.0 + 1e-12


def test_maximal_function_is_sublinear(space, rng):
    fam = enumerate_ball_family(space)
    for _ in range(20):
        f, g = rng.normal(size=(2, space.n_points))
        lhs = maximal_function(space, f + g, fam)
        rhs = maximal_function(space, f, fam) + maximal_function(space, g, fam)
        assert np.all(lhs <= rhs * (1.0 + 1e-12) + 1e-15)
        assert np.allclose(maximal_function(space, -3.0 * f, fam), 3.0 * maximal_function(space, f, fam),
                           rtol=1e-12, atol=0)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_weight_dilation_of_random_weights(space, rng, p):
    fam = enumerate_ball_family(space)
    for _ in range(20):
        w = np.exp(rng.normal(scale=1.0, size=space.n_points))
        assert weight_dilation_check(space, w, p, fam) <= 1.0 + 1e-12
