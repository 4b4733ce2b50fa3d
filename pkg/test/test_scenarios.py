import pytest

from utils.errors import InvalidInput, UnknownScenario
from utils.scenarios import (
    COARSE_TOL, ScenarioReport, expect, lacunary_union, list_scenarios, run_scenario,
)

SCENARIOS = [
    "classical_ms_indicator_1d",
    "condition_gallery",
    "prop1116_wrd_failure",
    "prop1233_lacunary_union",
    "prop835_double_exponential",
    "rubio_properties",
    "thm1_bounded_finite",
    "weighted_twosided",
]


def _failures(report):
    return [e.description for e in report.expectations if e.outcome == "fail"]


def test_registry_lists_every_scenario():
    entries = list_scenarios()
    assert [e["name"] for e in entries] == SCENARIOS
    assert all(e["anchor"] for e in entries)


@pytest.mark.parametrize("name, prefix", [
    ("classical_ms_indicator_1d", "Maz'ya–Shaposhnikova formula:"),
    ("thm1_bounded_finite", "Theorem 1:"),
    ("prop835_double_exponential", "Proposition 835:"),
    ("prop1116_wrd_failure", "Proposition 1116:"),
    ("prop1233_lacunary_union", "Proposition 1233:"),
    ("weighted_twosided", "Theorem 01011838:"),
    ("rubio_properties", "Lemma 3.7:"),
    ("condition_gallery", "Remark 2250(i):"),
])
def test_anchor_names_its_result(name, prefix):
    anchors = {e["name"]: e["anchor"] for e in list_scenarios()}
    assert anchors[name].startswith(prefix)
    if name == "prop1116_wrd_failure":
        report = run_scenario(name, {"n_samples": "5"})
        assert report.anchor.startswith(prefix)


@pytest.mark.parametrize("name, overrides", [
    ("prop835_double_exponential", {}),
    ("prop1116_wrd_failure", {}),
    ("prop1233_lacunary_union", {}),
    ("condition_gallery", {}),
    ("thm1_bounded_finite", {"n_spaces": "3"}),
    ("rubio_properties", {"n_spaces": "3", "n_g": "10"}),
])
def test_scenario_passes(name, overrides):
    report = run_scenario(name, overrides)
    assert report.passed, _failures(report)
    assert report.schema_version == 1


def test_classical_scenario_with_coarse_grid():
    report = run_scenario("classical_ms_indicator_1d", {"s_grid": "coarse"})
    assert report.passed, _failures(report)
    assert report.measured["tolerance"] == COARSE_TOL
    assert report.parameters["s_grid"] == [0.5, 0.1, 0.01, 0.001]


def test_weighted_twosided_small():
    report = run_scenario("weighted_twosided", {"n_functions": "4"})
    assert report.passed, _failures(report)
    envelopes = report.measured["envelopes"]
    assert len(envelopes) == 4
    for row in envelopes:
        assert row["refine_drift"] < 0.1
        assert row["refined_min"] > 0.0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["thm1_bounded_finite", "rubio_properties", "weighted_twosided"])
def test_scenario_passes_at_default_scale(name):
    report = run_scenario(name)
    assert report.passed, _failures(report)
    params = report.parameters
    if name == "thm1_bounded_finite":
        assert params["n_spaces"] == 10
        assert len(report.measured["spaces"]) == 10
    elif name == "rubio_properties":
        assert (params["n_spaces"], params["n_g"]) == (20, 50)
    else:
        assert params["n_functions"] == 20
        assert all(row["refine_drift"] < 0.1 for row in report.measured["envelopes"])


def test_same_parameters_same_report():
    a = run_scenario("thm1_bounded_finite", {"n_spaces": "2", "n_points": "8"})
    b = run_scenario("thm1_bounded_finite", {"n_spaces": "2", "n_points": "8"})
    assert a.model_dump() == b.model_dump()
    c = run_scenario("thm1_bounded_finite", {"n_spaces": "2", "n_points": "8", "seed": "1"})
    assert c.measured != a.measured


def test_failed_expectation_is_reported_not_raised():
    report = run_scenario("prop835_double_exponential", {"small_bound": "1e-9"})
    assert not report.passed
    assert any("F(0.0001)" in d for d in _failures(report))
    assert "[FAIL] F(0.0001)" in report.render_text()


def test_unknown_inputs():
    with pytest.raises(UnknownScenario):
        run_scenario("no_such_scenario")
    with pytest.raises(InvalidInput):
        run_scenario("prop835_double_exponential", {"not_a_parameter": "1"})


def test_wrd_failure_defaults_follow_lambda_2_example():
    report = run_scenario("prop1116_wrd_failure", {"n_samples": "20"})
    assert report.passed, _failures(report)
    assert (report.parameters["k_max"], report.parameters["lam"]) == (40, 2.0)
    assert report.parameters["log2_r_hi"] == float(2 ** 39)
    assert report.measured["wrd"]["window_inf"] == pytest.approx(1.0, abs=1e-12)


def test_overrides_accept_log_numbers():
    report = run_scenario("prop1116_wrd_failure", {"k_max": "log2:4", "log2_r_hi": "log2:10", "n_samples": "20"})
    assert report.parameters["k_max"] == 16
    assert report.parameters["log2_r_hi"] == 1024.0


def test_overall_follows_expectations():
    report = ScenarioReport(name="x", anchor="y", expectations=[expect("a", True), expect("b", False)],
                            overall="pass")
    assert report.overall == "fail"
    assert ScenarioReport(name="x", anchor="y").passed


def test_lacunary_union_shape():
    omega = lacunary_union(3)
    assert omega.intervals == [(4.0, 6.0), (16.0, 20.0), (64.0, 72.0)]
    assert omega.measure == pytest.approx(14.0)
