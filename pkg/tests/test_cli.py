"""Command-line behaviour and exit codes."""

from __future__ import annotations

import json

import pytest

from mdresolve import Resolver
from mdresolve.cli import main
from mdresolve.io.csv_loader import CSVLoader


def run(capsys, *argv: str) -> tuple[int, dict, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip().startswith(("{", "[")) else {}
    return code, payload, captured.err


def test_fixtures_json(capsys):
    code, payload, _ = run(capsys, "fixtures", "--json")
    assert code == 0
    assert "simple_cycle" in payload
    assert payload["count"]["description"]


def test_fixtures_listing(capsys):
    assert main(["fixtures"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Available fixtures: 9")
    assert "  two_md: " in out


def test_classify(capsys):
    code, payload, _ = run(capsys, "classify", "--fixture", "simple_cycle")
    assert code == 0
    assert payload == {"class": "SimpleCycle"}


def test_closure(capsys):
    code, _, _ = run(capsys, "closure", "--fixture", "attribute_closure", "--kind", "attribute")
    assert code == 0


@pytest.mark.parametrize("index", ["9", "-1"])
def test_closure_md_index_out_of_range(capsys, index):
    code, _, err = run(capsys, "closure", "--fixture", "count", "--kind", "tuple", "--md", index)
    assert code == 2
    error = json.loads(err)
    assert error["error"] == "ConfigError"
    assert "0..0" in error["message"]


def test_closure_of_a_chosen_md(capsys):
    code, payload, _ = run(capsys, "closure", "--fixture", "two_md", "--kind", "tuple", "--md", "1")
    assert code == 0
    assert payload["kind"] == "tuple"


def test_mris(capsys):
    code, payload, _ = run(capsys, "mris", "--fixture", "simple_cycle")
    assert code == 0
    assert payload["count"] == 16
    assert payload["min_changes"] == 6
    assert len(payload["mris"]) == 16


def test_mris_written_to_directory(capsys, tmp_path):
    out = tmp_path / "mris"
    code, payload, _ = run(capsys, "mris", "--fixture", "simple_cycle", "--out", str(out))
    assert code == 0
    assert "mris" not in payload
    assert (out / "summary.json").is_file()
    assert (out / "mri_000" / "R.csv").is_file()
    assert (out / "mri_015" / "changes.json").is_file()
    assert not (out / "mri_016").exists()


def test_resolve_json(capsys):
    code, payload, _ = run(capsys, "resolve", "--fixture", "count", "--trace")
    assert code == 0
    assert payload["steps"] >= 1
    assert len(payload["trace"]) == payload["steps"] + 1
    assert payload["changes"] == [["R", 0, "B"]]


def test_resolve_csv(capsys, tmp_path):
    code, _, err = run(capsys, "resolve", "--fixture", "count", "--format", "csv", "--out", str(tmp_path))
    assert code == 0
    assert "Wrote:" in err
    assert (tmp_path / "R.csv").is_file()


def test_answer(capsys):
    code, payload, _ = run(capsys, "answer", "--fixture", "count", "--query", "q", "--strategy", "rewrite")
    assert code == 0
    assert payload["answers"] == [["a1", "b2", "c1"], ["a1", "b2", "c2"], ["a1", "b2", "c3"]]


def test_answer_from_query_file(capsys, tmp_path):
    path = tmp_path / "heads.cq"
    path.write_text("Q(x) :- R(x, y, z)\n", encoding="utf-8")
    code, payload, _ = run(capsys, "answer", "--fixture", "count", "--query", str(path))
    assert code == 0
    assert payload["answers"] == [["a1"]]


def test_rewrite_text(capsys):
    assert main(["rewrite", "--fixture", "count", "--emit-text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Q′(x, y, z) :- ")
    assert "Count{" in out


def test_rewrite_json(capsys):
    code, payload, _ = run(capsys, "rewrite", "--fixture", "count")
    assert code == 0
    assert payload["hsc_mode"] is False


def test_oracle_check_agrees(capsys):
    code, payload, _ = run(capsys, "oracle-check", "--fixture", "count")
    assert code == 0
    assert payload["agree"] is True
    assert payload["oracle"]["min_changes"] == 1


def test_oracle_check_without_closure_form(capsys):
    with pytest.warns(UserWarning):
        code, payload, _ = run(capsys, "oracle-check", "--fixture", "two_md")
    assert code == 0
    assert payload["agree"] is None
    assert payload["closure"] is None
    assert [r["minimal"] for r in payload["resolved"]].count(True) == 1
    assert {r["changes"] for r in payload["resolved"] if not r["minimal"]} >= {3}


def test_mris_through_the_oracle(capsys):
    with pytest.warns(UserWarning, match="active domain"):
        code, payload, _ = run(capsys, "mris", "--fixture", "two_md")
    assert code == 0
    assert payload["class"] == "DAG"
    assert payload["method"] == "oracle"
    assert (payload["count"], payload["min_changes"]) == (1, 2)
    assert payload["active_domain_relative"] is True


def test_cqa_check_random(capsys):
    code, payload, _ = run(capsys, "cqa-check", "--trials", "20", "--seed", "1")
    assert code == 0
    assert payload["passed"] == 20
    assert payload["failed"] == 0


def test_cqa_check_fixture(capsys):
    code, payload, _ = run(capsys, "cqa-check", "--fixture", "cqa_hardness", "--trials", "5")
    assert code == 0
    assert all(t["query"] == "Q() :- R(x, y, 'c'), R(z, y, 'd')" for t in payload["trials"])


def test_cqa_check_needs_one_md(capsys):
    code, _, err = run(capsys, "cqa-check", "--fixture", "two_md", "--trials", "1")
    assert code == 2
    assert json.loads(err)["error"] == "ConfigError"


def test_check_fan_semantics(capsys, tmp_path):
    r = Resolver.from_fixture("count")
    CSVLoader.write_directory(r.resolve(), tmp_path)
    code, payload, _ = run(capsys, "check-fan-semantics", "--fixture", "count", "--other", str(tmp_path))
    assert code == 0
    assert payload["pair"]["verdict"] is True
    assert payload["fan"]["verdict"] is True

    CSVLoader.write_directory(r.instance, tmp_path)
    code, payload, _ = run(capsys, "check-fan-semantics", "--fixture", "count", "--other", str(tmp_path))
    assert payload["pair"]["verdict"] is False


def test_unknown_fixture(capsys):
    code, _, err = run(capsys, "classify", "--fixture", "nope")
    assert code == 1
    assert json.loads(err)["error"] == "FixtureNotFoundError"


def test_missing_path(capsys, tmp_path):
    code, _, err = run(capsys, "classify", "--schema", str(tmp_path / "none.sch"), "--mds", str(tmp_path / "none.md"))
    assert code == 2
    assert json.loads(err)["error"] == "ConfigError"


def test_inputs_required(capsys):
    code, _, _ = run(capsys, "classify")
    assert code == 2


def test_csv_format_needs_out(capsys):
    code, _, err = run(capsys, "resolve", "--fixture", "count", "--format", "csv")
    assert code == 2
    assert "out" in json.loads(err)["message"]


@pytest.mark.parametrize("argv", [[], ["bogus"], ["answer", "--strategy", "guess"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2
    assert "usage:" in capsys.readouterr().err
