from __future__ import annotations

import copy
import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import pytest

from coregkit import scenario
from coregkit.errors import InputError, ParseError
from coregkit.scenario import compare, jsonable, run_document, run_scenario, shipped_scenarios

FIXTURES = Path(__file__).parent / "fixtures"

CUSP = {
    "name": "cusp",
    "steps": [{"id": "cusp", "op": "curve_lct", "args": {"germ": "x1^2 + x2^3"}}],
    "expect": [{"step": "cusp", "field": "value", "equals": "5/6", "provenance": "derived"}],
}


def test_shipped_scenarios_pass():
    shipped = shipped_scenarios()
    assert len(shipped) >= 20
    for name, path in shipped.items():
        rep = run_scenario(path)
        assert rep.passed, (name, [e for e in rep.expectations if not e["pass"]])
        assert rep.exit_code == 0


def test_every_shipped_expectation_is_tagged():
    for path in shipped_scenarios().values():
        doc = json.loads(path.read_text())
        assert doc["expect"]
        for e in doc["expect"]:
            assert e["provenance"] in {"cited", "trivial", "derived"}


def test_named_scenarios():
    shipped = shipped_scenarios()
    rep = run_scenario(shipped["cor_curve_x2y"])
    values = {(e["step"], e["field"]): e["actual"] for e in rep.expectations}
    assert "5/8" in values.values()
    rep = run_scenario(shipped["lemma_line_conic_case2"])
    assert rep.passed
    assert any(e["actual"] == "s+2f" for e in rep.expectations)


def test_wrong_expectation_fails_with_diff():
    rep = run_scenario(FIXTURES / "cusp_wrong.json")
    assert not rep.passed and rep.exit_code == 1
    (e,) = rep.expectations
    assert e["diff"] == "5/6 ≠ 5/9"
    assert rep.to_json()["summary"] == {"total": 1, "failed": 1, "passed": False}


def test_untagged_expectation_refused():
    with pytest.raises(ParseError):
        run_scenario(FIXTURES / "untagged.json")


def test_unknown_provenance_refused():
    doc = copy.deepcopy(CUSP)
    doc["expect"][0]["provenance"] = "folklore"
    with pytest.raises(ParseError):
        run_document(doc)


def test_two_relations_refused():
    doc = copy.deepcopy(CUSP)
    doc["expect"][0]["at_least"] = "1/2"
    with pytest.raises(ParseError):
        run_document(doc)


def test_unknown_op_and_step():
    doc = copy.deepcopy(CUSP)
    doc["steps"][0]["op"] = "frobnicate"
    with pytest.raises(InputError):
        run_document(doc)
    doc = copy.deepcopy(CUSP)
    doc["expect"][0]["step"] = "nowhere"
    with pytest.raises(ParseError):
        run_document(doc)
    doc = copy.deepcopy(CUSP)
    doc["steps"].append(dict(doc["steps"][0]))
    with pytest.raises(ParseError):
        run_document(doc)


def test_unknown_field():
    doc = copy.deepcopy(CUSP)
    doc["expect"][0]["field"] = "colour"
    with pytest.raises(InputError):
        run_document(doc)


def test_bad_germ_is_input_error():
    with pytest.raises(ParseError):
        run_scenario(FIXTURES / "bad_germ.json")


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(InputError):
        run_scenario(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(ParseError):
        run_scenario(bad)


def test_references_between_steps():
    doc = {
        "name": "refs",
        "steps": [
            {"id": "a", "op": "curve_lct", "args": {"germ": "x1^2 + x2^3"}},
            {"id": "b", "op": "curve_lct", "args": {"germ": "x1^3 + x2^4"}},
            {
                "id": "s",
                "op": "sum_lct",
                "args": {
                    "first": {"value": "$a.value", "kind": "$a.kind", "variables": [0, 1]},
                    "second": {"value": "$b.value", "kind": "$b.kind", "variables": [2, 3]},
                },
            },
        ],
        "expect": [{"step": "s", "field": "value", "equals": 1, "provenance": "derived"}],
    }
    assert run_document(doc).passed
    doc["steps"][2]["args"]["first"]["value"] = "$later.value"
    with pytest.raises(InputError):
        run_document(doc)


def test_compare_relations():
    assert compare("5/6", {"equals": "5/6"}) == (True, "")
    assert compare("5/6", {"equals": "10/12"}) == (True, "")
    assert compare(Fraction(5, 6), {"at_least": "1/2"}) == (True, "")
    assert compare(3, {"at_most": 2}) == (False, "3 > 2")
    assert compare("2", {"at_least": "5/2"}) == (False, "2 < 5/2")
    assert compare(True, {"equals": True}) == (True, "")
    assert compare(True, {"equals": 1}) == (False, "true ≠ 1")
    assert compare("s+2f", {"equals": "s+4f"}) == (False, "s+2f ≠ s+4f")
    assert compare([4, 6, 4], {"equals": [4, 6, 4]}) == (True, "")


def test_jsonable():
    assert jsonable({"a": Fraction(1, 2), "b": [Fraction(3)]}) == {"a": "1/2", "b": ["3"]}


def test_reports_are_deterministic():
    for path in shipped_scenarios().values():
        assert run_scenario(path).dumps() == run_scenario(path).dumps()


def test_parallel_batch_matches_sequential():
    paths = sorted(shipped_scenarios().values())
    sequential = [run_scenario(p).dumps() for p in paths]
    with ThreadPoolExecutor(4) as pool:
        parallel = list(pool.map(lambda p: run_scenario(p).dumps(), paths))
    assert parallel == sequential


def test_schema_is_shipped():
    s = scenario.schema()
    assert s["properties"]["expect"]["items"]["properties"]["provenance"]["enum"] == ["cited", "trivial", "derived"]
