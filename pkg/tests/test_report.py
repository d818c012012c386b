import json
import math

import pytest

from dfsbell.report import (Check, Report, Section, approx_check, bound_check,
                            load_schema, render_text, to_dict, to_json)

jsonschema = pytest.importorskip("jsonschema")


def _sample_report(passed=True):
    checks = (
        approx_check("a", 1.0 + 1e-12, 1.0, 1e-9, description="d", source="s"),
        bound_check("b", 0.5, 1.0, description="d", source="s"),
        Check(name="c", passed=passed, detail="line one\nline two"),
    )
    return Report(title="t", seed=3, config={"k": 1},
                  sections=(Section("sec", checks),))


def test_check_helpers():
    assert approx_check("x", 1.0, 1.0, 0.0).passed
    assert not approx_check("x", 1.1, 1.0, 1e-3).passed
    assert bound_check("x", 0.9, 1.0).passed
    assert not bound_check("x", 1.1, 1.0).passed


def test_report_aggregation():
    good = _sample_report(True)
    assert good.passed and good.n_checks() == 3 and good.n_passed() == 3
    bad = _sample_report(False)
    assert not bad.passed
    assert not bad.sections[0].passed
    assert bad.n_passed() == 2


def test_json_round_trip_and_determinism():
    rep = _sample_report()
    text1, text2 = to_json(rep), to_json(rep)
    assert text1 == text2
    payload = json.loads(text1)
    assert payload["passed"] is True
    assert payload["sections"][0]["checks"][2]["detail"] == "line one\nline two"


def test_json_rejects_non_finite_values():
    rep = Report(title="t", seed=0, config={},
                 sections=(Section("s", (Check("c", True, value=math.nan),)),))
    with pytest.raises(ValueError):
        to_json(rep)


def test_schema_validates_serialized_reports():
    schema = load_schema()
    jsonschema.validate(to_dict(_sample_report()), schema)
    jsonschema.validate(to_dict(_sample_report(False)), schema)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"title": "t"}, schema)


def test_render_text_contents():
    out = render_text(_sample_report(False))
    assert "[FAIL] sec" in out
    assert "[PASS] a" in out
    assert "[FAIL] c" in out
    assert "line two" in out
    assert out.strip().endswith("overall: FAIL (2/3 checks)")
