import json
from pathlib import Path

import pytest

from prelie.errors import ParseError, ValidationError
from prelie.expr import evaluate, holds
from prelie.runner import OPERATIONS, corpus_scenarios, run_brackets, run_cohomology, run_scenario, run_search
from prelie.scenario import load, loads

import oracles

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"

A2_JSON = {"dim": 2, "products": [{"i": 2, "j": 1, "k": 1, "c": "-1"}, {"i": 2, "j": 2, "k": 2, "c": "1"}]}


def scenario(**extra) -> str:
    base = {"id": "t", "algebras": {"A2": A2_JSON},
            "checks": [{"op": "check_pre_lie", "args": {"algebra": "A2"}, "expect": "true"}]}
    base.update(extra)
    return json.dumps(base, indent=2)


# expressions

def test_expressions():
    from fractions import Fraction as F
    assert evaluate("-b/a**2", {"a": F(2), "b": F(3)}) == F(-3, 4)
    assert evaluate("7/2", {}) == F(7, 2)
    assert holds("a*b != 0", {"a": F(1), "b": F(2)})
    assert not holds("a != 0", {"a": F(0)})
    with pytest.raises(ParseError):
        evaluate("__import__('os')", {})
    with pytest.raises(ParseError):
        evaluate("1/0", {})


# loading

def test_minimal_scenario_passes():
    res = run_scenario(loads(scenario()))
    assert res.ok and res.checks[0].verdict


def test_malformed_rational_is_a_parse_error():
    text = scenario(parameters={"a": "1/0"})
    with pytest.raises(ParseError) as info:
        loads(text)
    assert info.value.line is not None and info.value.col is not None
    line = text.splitlines()[info.value.line - 1]
    assert "1/0" in line


def test_broken_json_reports_position():
    with pytest.raises(ParseError) as info:
        loads('{"id": "x",\n  "algebras": {,}}')
    assert info.value.line == 2


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d["checks"].append({"op": "check_frobnication", "args": {}, "expect": "true"}), "check_frobnication"),
    (lambda d: d["checks"].append({"op": "check_pre_lie", "args": {"algebra": "B"}, "expect": "true"}), "B"),
    (lambda d: d["checks"].append({"op": "check_pre_lie", "args": {"algebra": "A2"}, "expect": "maybe"}), "expect"),
    (lambda d: d.update(brackets=[{"op": "partial", "cochain": "x"}]), "bracket"),
])
def test_validation_errors(mutate, needle):
    d = json.loads(scenario())
    mutate(d)
    with pytest.raises(ValidationError) as info:
        loads(json.dumps(d))
    assert needle in str(info.value)


def test_every_declared_op_is_registered():
    for sc in corpus_scenarios():
        assert all(chk["op"] in OPERATIONS for chk in sc.checks)


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.json")), ids=lambda p: p.stem)
def test_round_trip_of_example_scenarios(path):
    sc = load(path)
    assert loads(sc.dumps()).to_dict() == sc.to_dict()
    assert loads(sc.dumps()).dumps() == sc.dumps()


def test_round_trip_of_corpus():
    for sc in corpus_scenarios():
        assert loads(sc.dumps()).dumps() == sc.dumps()


# running

def test_expected_false_on_corrupted_kvn_passes():
    res = run_scenario(load(SCENARIOS / "a2-kvn-check.json"), samples=8)
    assert res.ok
    bad = [c for c in res.checks if c.expect == "false"]
    assert bad and not bad[0].verdict and bad[0].matched


def test_wrong_expectation_is_a_mismatch():
    d = json.loads(scenario())
    d["checks"][0]["expect"] = "false"
    res = run_scenario(loads(json.dumps(d)))
    assert not res.ok


def test_search_scenarios():
    out = run_search(load(SCENARIOS / "a2-nijenhuis-search.json"))
    assert out["count"] == len(out["results"]) > 0
    mc = run_search(load(SCENARIOS / "a3h-strong-mc-search.json"))
    zero = [["0"] * 3 for _ in range(3)]
    assert zero in mc["results"]
    assert all(m[2][1] != "0" or m == zero for m in mc["results"])


def test_bracket_scenario():
    out = run_brackets(load(SCENARIOS / "a2-brackets.json"))
    results = {(b["op"], b.get("left"), b.get("cochain")): b["result"] for b in out["brackets"]}
    assert results[("mn", "pi", None)]["entries"] == []
    assert results[("mn", "pi_bad", None)]["entries"] != []
    assert not oracles.is_pre_lie(oracles.structure(2, {(1, 2): {1: -1}, (2, 2): {2: 1}, (1, 1): {2: 1}}))


def test_cohomology_scenario_matches_rank_oracle():
    from prelie import regular_bimodule
    from prelie.cochain import coboundary_matrix
    from data import alg

    out = run_cohomology(load(SCENARIOS / "a2-cohomology.json"), 2)
    b = regular_bimodule(alg("A2"))
    r1 = oracles.rank(coboundary_matrix(b, 1).to_lists())
    r2 = oracles.rank(coboundary_matrix(b, 2).to_lists())
    rows = out["rows"]
    assert rows[0]["dim"] == rows[0]["cochains"] - r1
    assert rows[1]["dim"] == rows[1]["cochains"] - r2 - r1
