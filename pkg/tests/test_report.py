import json

import pytest

from meanscope.detector import DetectorConfig, detect
from meanscope.expr import GeneratorPair, builtin_pair
from meanscope.report import (
    SCHEMA,
    csv_table,
    dumps,
    emit_report,
    format_float,
    report_dict,
)


@pytest.fixture(scope="module")
def qa_report():
    return detect(builtin_pair("quad_over_id", [1]))


@pytest.fixture(scope="module")
def not_report():
    return detect(builtin_pair("log_pair"))


def test_qa_json(qa_report):
    doc = json.loads(emit_report(qa_report, "json"))
    assert doc["schema"] == SCHEMA
    assert doc["verdict"] == "QUASIARITHMETIC"
    assert isinstance(doc["p_estimate"], float)
    assert doc["witness"] is None


def test_not_json_has_witness(not_report):
    doc = json.loads(emit_report(not_report, "json"))
    assert doc["verdict"] == "NOT_QUASIARITHMETIC"
    w = doc["witness"]
    assert set(w) >= {"expression", "bisymmetry", "conic_residual"}
    assert len(w["bisymmetry"]["quadruple"]) == 4


def test_json_covers_report_fields(qa_report, not_report):
    fields = {"verdict", "regularity", "conic", "quad_form", "profile", "p_estimate",
              "equality_max_dev", "bajraktarevic", "criteria", "criteria_agreement", "notes"}
    for rep in (qa_report, not_report):
        assert fields <= set(json.loads(emit_report(rep, "json")))


def test_json_round_trips_floats_exactly(not_report):
    doc = json.loads(emit_report(not_report, "json"))
    assert doc["profile"]["min"] == not_report.profile.min
    assert doc["conic"]["residual"] == not_report.conic.residual
    assert doc["witness"]["bisymmetry"]["deviation"] == not_report.bisymmetry_witness.deviation


def test_field_set_stable_across_runs():
    one = json.loads(emit_report(detect(builtin_pair("log_pair")), "json"))
    two = json.loads(emit_report(detect(builtin_pair("log_pair")), "json"))
    assert one == two


def test_inconclusive_json_carries_regularity_witness():
    rep = detect(GeneratorPair.from_text("x", "x^2", -1, 1))
    doc = json.loads(emit_report(rep, "json"))
    assert doc["verdict"] == "INCONCLUSIVE"
    assert doc["witness"]["regularity"]["violated"] == "g_prime_zero"


def test_seed_recorded(not_report):
    assert json.loads(emit_report(not_report, "json"))["config"]["seed"] == 42
    rep = detect(builtin_pair("log_pair"), DetectorConfig(seed=9, bisymmetry_quadruples=20))
    assert report_dict(rep)["config"]["seed"] == 9


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert format_float(1e-300) == "1e-300"
    assert format_float(2 / 3) == "0.66666666666666663"
    assert format_float(float("nan")) == "null"
    for v in (1 / 3, -2.5e17, 6.02214076e23):
        assert float(format_float(v)) == v


def test_dumps_nested():
    text = dumps({"a": [1, 2.5, None, True], "b": {}, "c": [{"d": "x\"y"}]})
    assert json.loads(text) == {"a": [1, 2.5, None, True], "b": {}, "c": [{"d": 'x"y'}]}


def test_text_summary(qa_report, not_report):
    text = emit_report(qa_report, "text").decode()
    assert text.startswith("verdict: QUASIARITHMETIC") and "p estimate" in text
    assert "bisymmetry witness" in emit_report(not_report, "text").decode()


def test_csv_profile_of_log_pair(not_report):
    data = emit_report(not_report, "csv")
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "x,E" and len(lines) == 202
    xs = [float(line.split(",")[0]) for line in lines[1:]]
    assert all(b > a for a, b in zip(xs, xs[1:]))


def test_csv_h_table(qa_report, not_report):
    lines = emit_report(qa_report, "csv", table="h").decode().splitlines()
    assert lines[0] == "x,h" and len(lines) == 514
    assert float(lines[1].split(",")[1]) == 0.0
    with pytest.raises(ValueError):
        emit_report(not_report, "csv", table="h")


def test_csv_table_helper():
    assert csv_table(("a", "b"), [(1.0, 2)]) == "a,b\n1.0,2\n"


def test_unknown_format(qa_report):
    with pytest.raises(ValueError):
        emit_report(qa_report, "yaml")
