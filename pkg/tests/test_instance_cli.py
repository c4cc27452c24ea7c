import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

import oracles
from zero_one_ot import (CostMatrix, ParseError, Potential, Relation,
                         RelationNotPreorder, ValidationError, build_grid_instance)
from zero_one_ot.cli import run_command
from zero_one_ot.instance import Instance, emit_instance, parse_instance

F = Fraction
FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name):
    return str(FIXTURES / name)


def run(argv, stdin=b""):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdin=io.BytesIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_chain_fixture():
    inst = parse_instance((FIXTURES / "chain.json").read_bytes())
    assert inst.ground.points == ("a", "b", "c")
    assert inst.relation == Relation.chain(inst.ground)
    assert inst.mu.weights == (0, F(1, 2), F(1, 2))
    assert inst.potential.values == (0, F(1, 2), 1)


def test_parse_exact_thirds():
    inst = parse_instance((FIXTURES / "thirds.json").read_text())
    assert inst.mu.weights == (F(1, 3),) * 3
    assert sum(inst.mu.weights) == 1


def test_threshold_generator_matches_grid():
    inst = parse_instance((FIXTURES / "grid4.json").read_text())
    g = build_grid_instance(4)
    assert inst.relation == g.relation
    assert inst.mu == g.mu and inst.nu == g.nu


@pytest.mark.parametrize("doc, fragment", [
    ({"elements": [{"id": "a"}], "mu": {"a": "1"}, "nu": {"a": "1"},
      "relation": {"pairs": []}, "colour": "red"}, "colour"),
    ({"elements": [{"id": "a", "weight": "1"}], "mu": {"a": "1"}, "nu": {"a": "1"},
      "relation": {"pairs": []}}, "weight"),
    ({"elements": [{"id": "a"}], "mu": {"a": "1"}, "relation": {"pairs": []}}, "nu"),
    ({"elements": [{"id": "a"}], "mu": {"b": "1"}, "nu": {"a": "1"},
      "relation": {"pairs": []}}, "$.mu.b"),
    ({"elements": [{"id": "a"}], "mu": {"a": "0.5"}, "nu": {"a": "1"},
      "relation": {"pairs": []}}, "decimal"),
    ({"elements": [{"id": "a"}], "mu": {"a": "1"}, "nu": {"a": "1"},
      "relation": {"generator": "spiral"}}, "spiral"),
])
def test_parse_rejects(doc, fragment):
    with pytest.raises(ParseError) as info:
        parse_instance(json.dumps(doc))
    assert fragment in str(info.value)


def test_float_literal_rejected():
    text = '{"elements": [{"id": "a"}], "mu": {"a": 1.0}, "nu": {"a": "1"}, "relation": {"pairs": []}}'
    with pytest.raises(ParseError, match="float"):
        parse_instance(text)


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_instance('{\n  "elements": [\n    {"id": "a"},,\n  ]\n}')
    assert info.value.line == 3
    assert info.value.column is not None
    assert "line 3" in str(info.value)


def test_measure_sum_checked_after_parsing():
    doc = {"elements": [{"id": "a"}, {"id": "b"}], "mu": {"a": "1/3", "b": "1/3"},
           "nu": {"a": "1"}, "relation": {"pairs": []}}
    with pytest.raises(ValidationError):
        parse_instance(json.dumps(doc))


def test_nontransitive_needs_auto_close():
    text = (FIXTURES / "nontransitive.json").read_text()
    with pytest.raises(RelationNotPreorder):
        parse_instance(text)
    inst = parse_instance(text, auto_close=True)
    assert inst.closed and ("a", "c") in inst.relation.pairs()


def test_round_trip_fixtures():
    for path in sorted(FIXTURES.glob("*.json")):
        if path.name == "nontransitive.json":
            continue
        first = parse_instance(path.read_text())
        again = parse_instance(emit_instance(first))
        assert again == first, path.name


@given(st.integers(0, 10_000), st.integers(1, 6), st.booleans())
def test_round_trip_random(seed, n, with_cost):
    rng = oracles.rng(seed)
    g, mu, nu, rel = oracles.instance(rng, n, dag=False)
    cost = CostMatrix(g, oracles.random_quasimetric(rng, n)) if with_cost else None
    pot = Potential(g, [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)])
    inst = Instance(g, mu, nu, rel, cost, pot)
    assert parse_instance(emit_instance(inst)) == inst


def test_round_trip_labels():
    g = build_grid_instance(3)
    inst = Instance(g.ground, g.mu, g.nu, g.relation)
    assert parse_instance(emit_instance(inst)) == inst


def test_cli_solve_chain():
    code, out, err = run(["solve", fixture("chain.json"), "--format", "json"])
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["primal_value"] == "1/2" and doc["dual_value"] == "1/2"
    assert doc["oracle_value"] == "1/2" and doc["certificate_ok"] is True
    assert doc["optimal_set"] in (["c"], ["b", "c"])


def test_cli_counterexample_csv():
    code, out, _ = run(["counterexample", "--resolutions", "1,2,4", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["resolution", "primal_value", "dual_value", "dual_set_size",
                       "shift_mass", "certificate_bound"]
    assert [r[1] for r in rows[1:]] == ["1", "1/2", "1/4"]


def test_cli_check_names_triple():
    code, out, err = run(["check", fixture("nontransitive.json")])
    assert code == 1
    assert "transitive: a b c" in out
    code, out, _ = run(["check", fixture("nontransitive.json"), "--auto-close", "--format", "json"])
    assert code == 0 and json.loads(out)["closed_automatically"] is True


def test_cli_solve_nontransitive_fails_on_stderr():
    code, out, err = run(["solve", fixture("nontransitive.json")])
    assert code == 1 and out == ""
    assert err.startswith("error:") and "a" in err and "c" in err


def test_cli_check_cost_witness():
    code, out, _ = run(["check", fixture("quasimetric.json"), "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["cost_triangle"] is True and doc["ok"] is True


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["solve", "--format", "xml", "x.json"],
    ["counterexample", "--resolutions", "a,b"], ["transform", "--direction", "up"],
])
def test_cli_usage_errors(argv):
    code, out, err = run(argv)
    assert code == 2 and out == ""
    assert "usage" in err


def test_cli_missing_file():
    code, out, err = run(["solve", fixture("absent.json")])
    assert code == 1 and err.startswith("error:")


def test_cli_reads_stdin():
    data = (FIXTURES / "chain.json").read_bytes()
    assert run(["solve", "-", "--format", "json"], stdin=data) == run(
        ["solve", fixture("chain.json"), "--format", "json"])


def test_cli_transform_and_layercake():
    code, out, _ = run(["transform", fixture("chain.json"), "--format", "json"])
    assert code == 0
    rows = json.loads(out)["transform"]
    assert [r["transform"] for r in rows] == ["-1", "-1", "-1"]
    assert [r["transform_back"] for r in rows] == ["1", "1", "1"]
    code, out, _ = run(["layercake", fixture("chain.json"), "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["set"] == ["c"] and doc["set_value"] == "1/2"


def test_cli_transform_needs_potential():
    code, _, err = run(["transform", fixture("thirds.json")])
    assert code == 1 and "potential" in err


def test_cli_shift_and_fsigma():
    code, out, _ = run(["counterexample", "--resolutions", "4", "--shift", "1", "--format", "json"])
    assert code == 0 and json.loads(out)["mass_on_R_n4"] == "3/4"
    code, _, err = run(["counterexample", "--resolutions", "4", "--shift", "9"])
    assert code == 1 and "error" in err
    code, out, _ = run(["fsigma", "--resolutions", "4", "--approximants", "1,2,4", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["nested_n4"] is True and doc["union_equals_relation_n4"] is True
    assert [r["primal_value"] for r in doc["approximants_n4"]][-1] == "1/4"


def test_cli_oracle_too_large():
    pts = [f"p{k}" for k in range(21)]
    doc = {"elements": [{"id": p} for p in pts], "mu": {"p0": "1"}, "nu": {"p20": "1"},
           "relation": {"generator": "chain"}}
    code, _, err = run(["solve", "-", "--oracle"], stdin=json.dumps(doc).encode())
    assert code == 1 and "error" in err
    assert run(["solve", "-"], stdin=json.dumps(doc).encode())[0] == 0


@pytest.mark.parametrize("fmt", ["json", "csv", "table"])
@pytest.mark.parametrize("argv", [
    ["check", fixture("chain.json")], ["solve", fixture("grid4.json")],
    ["transform", fixture("quasimetric.json"), "--direction", "second"],
    ["layercake", fixture("chain.json")], ["counterexample"], ["fsigma"],
])
def test_cli_every_format_is_deterministic_and_exact(argv, fmt):
    first = run(argv + ["--format", fmt])
    assert first[0] == 0
    assert run(argv + ["--format", fmt]) == first
    if fmt == "json":
        json.loads(first[1], parse_float=lambda t: pytest.fail(f"float {t} in output"))
    if fmt == "csv":
        assert "~" not in first[1] and "." not in first[1]
