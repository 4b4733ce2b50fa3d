import numpy as np
import pytest

from db import dumps, envelope, read_json
from db.function import parse_function, parse_subset, parse_weight
from db.report import frame_to_csv, parse_report, read_report, write_report
from db.space import load_space, parse_space
from db.spec import parse_region
from utils.conditions import doubling_profile
from utils.errors import AsymmetricDistance, InvalidInput, LengthMismatch, UnknownPoint
from utils.ms_functional import ALL, ms_scan
from utils.norm_specs import LpSpec, MaximalWeight
from utils.scenarios import ScenarioReport, expect
from utils.space_core import FinitePointSpace, IntervalDomain1D, StepFunction1D

TRIANGLE = {
    "type": "finite",
    "masses": [1.0, 2.0, 1.0],
    "distances": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
}


# --- 공간 ---

def test_parse_finite_space():
    space = parse_space(TRIANGLE)
    assert isinstance(space, FinitePointSpace)
    assert space.n_points == 3
    assert space.labels == ["0", "1", "2"]


def test_parse_named_spaces():
    dexp = parse_space({"type": "double_exponential", "k_max": 8})
    assert dexp.n_points == 8
    assert parse_space({"type": "geometric", "k_max": 5}).n_points == 5
    line = parse_space({"type": "intervals", "intervals": [[0, 1], [2, 3]]})
    assert isinstance(line, IntervalDomain1D)
    assert line.measure == pytest.approx(2.0)


def test_invalid_space_files():
    with pytest.raises(InvalidInput):
        parse_space({"type": "sphere"})
    with pytest.raises(InvalidInput):
        parse_space({"type": "finite", "masses": [1.0]})
    with pytest.raises(AsymmetricDistance):
        parse_space({**TRIANGLE, "distances": [[0, 1, 2], [1, 0, 1], [3, 1, 0]]})


def test_load_space_from_file(json_file):
    assert load_space(json_file("space.json", TRIANGLE)).n_points == 3
    with pytest.raises(InvalidInput):
        read_json("/nonexistent/space.json")


# --- 함수, 가중치, 부분집합 ---

def test_sparse_function_by_label(dexp):
    f = parse_function({"sparse": {"4": 1.0}}, dexp)
    assert f.sum() == 1.0
    assert f[dexp.point_index("4")] == 1.0
    g = parse_function({"sparse": {"#2": 3.0}, "default": 0.5}, dexp)
    assert g[2] == 3.0 and g[0] == 0.5


def test_function_file_errors():
    space = parse_space(TRIANGLE)
    with pytest.raises(LengthMismatch):
        parse_function({"values": [1.0, 2.0]}, space)
    with pytest.raises(InvalidInput):
        parse_function({"values": [1.0, 2.0, 3.0], "sparse": {"0": 1.0}}, space)
    with pytest.raises(UnknownPoint):
        parse_function({"sparse": {"missing": 1.0}}, space)


def test_step_function_on_intervals(line):
    f = parse_function({"breakpoints": [0.0, 1.0], "values": [0.0, 1.0, 0.0]}, line)
    assert isinstance(f, StepFunction1D)
    with pytest.raises(InvalidInput):
        parse_function({"breakpoints": [1.0, 0.0], "values": [0.0, 1.0, 0.0]}, line)


def test_weight_and_subset_files(line):
    space = parse_space(TRIANGLE)
    assert parse_weight({"values": [1, 2, 3]}, space) == [1.0, 2.0, 3.0]
    with pytest.raises(LengthMismatch):
        parse_weight([1.0], space)
    w = parse_weight({"kind": "maximal_indicator", "a": 0.0, "b": 1.0, "delta": 0.5}, line)
    assert isinstance(w, MaximalWeight)
    assert parse_subset({"points": [0, 2]}, space) == [0, 2]
    omega = parse_subset({"intervals": [[0, 1]]}, line)
    assert omega.measure == pytest.approx(1.0)
    with pytest.raises(InvalidInput):
        parse_subset([], space)


# --- 영역 ---

def test_parse_region():
    assert parse_region("all") is ALL
    assert parse_region(None) is ALL
    inside = parse_region("inside:2.5")
    assert inside.kind == "inside_ball"
    assert inside.radius_value == pytest.approx(2.5)
    outside = parse_region("outside:log2:1024")
    assert outside.kind == "outside_ball"
    assert outside.log2_radius == pytest.approx(1024.0)
    for bad in ("inside:-1", "around:2", "inside:abc"):
        with pytest.raises(InvalidInput):
            parse_region(bad)


def test_region_file(json_file):
    region = parse_region(json_file("region.json", {"kind": "subset", "points": [0, 1]}))
    assert region.kind == "subset"
    with pytest.raises(InvalidInput):
        parse_region(json_file("bad.json", {"kind": "inside_ball"}))


# --- 보고서 ---

def test_report_round_trip(tmp_path, line, indicator01):
    scan = ms_scan(line, indicator01, 1.0, LpSpec(p=1.0), s_grid=[0.5, 0.1, 0.01, 0.001])
    cond = doubling_profile(line, 0.0)
    scen = ScenarioReport(name="x", anchor="y", expectations=[expect("a", True, "1")])
    for i, report in enumerate((scan, cond, scen)):
        path = str(tmp_path / f"r{i}.json")
        write_report(path, report)
        assert read_report(path) == report


def test_report_envelope_checks():
    scen = ScenarioReport(name="x", anchor="y")
    data = envelope("scenario_report", scen)
    assert parse_report(data) == scen
    with pytest.raises(InvalidInput):
        parse_report({**data, "schema_version": 99})
    with pytest.raises(InvalidInput):
        parse_report({**data, "kind": "unknown"})
    with pytest.raises(InvalidInput):
        parse_report({**data, "data": {"name": 1}})


def test_dumps_is_stable():
    payload = {"b": 1.0, "a": [1, 2]}
    assert dumps(payload) == dumps(dict(reversed(list(payload.items()))))
    assert dumps(payload).endswith("\n")


def test_csv_format(line, indicator01):
    scan = ms_scan(line, indicator01, 1.0, LpSpec(p=1.0), s_grid=[0.5, 0.1, 0.01, 0.001])
    text = frame_to_csv(scan.to_frame())
    lines = text.split("\n")
    assert lines[0] == "s,F,ratio,in_bracket,trend"
    assert len(lines) == 6 and lines[-1] == ""
    assert "\r" not in text
    assert float(lines[1].split(",")[0]) == 0.5
    assert np.isclose(float(lines[1].split(",")[1]), scan.values[0], rtol=0, atol=0)
