"""Run configuration: validation, layering and the YAML loader."""

from __future__ import annotations

from pathlib import Path

import pytest

from mdresolve import Resolver
from mdresolve.config import RunConfig
from mdresolve.exceptions import ConfigError


def test_defaults():
    config = RunConfig()
    assert config.strategy == "auto"
    assert config.format == "json"
    assert config.fixture is None


@pytest.mark.parametrize(
    "overrides, field",
    [
        ({"limit": 0}, "limit"),
        ({"depth": -1}, "depth"),
        ({"trials": True}, "trials"),
        ({"seed": "1"}, "seed"),
        ({"strategy": "guess"}, "strategy"),
        ({"format": "xml"}, "format"),
    ],
)
def test_validation(overrides, field):
    with pytest.raises(ConfigError) as exc:
        RunConfig(**overrides)
    assert exc.value.field == field


def test_paths_are_coerced():
    assert RunConfig(schema="s.sch").schema == Path("s.sch")


def test_from_mapping_rejects_unknown_keys():
    with pytest.raises(ConfigError) as exc:
        RunConfig.from_mapping({"limit": 5, "colour": "red"})
    assert exc.value.field == "colour"
    assert RunConfig.from_mapping({"limit": 5}).limit == 5


def test_merged_skips_unset_flags():
    config = RunConfig(limit=10, seed=3).merged(limit=None, seed=4, fixture="count")
    assert (config.limit, config.seed, config.fixture) == (10, 4, "count")


def test_check_paths_and_require(tmp_path):
    RunConfig(schema=tmp_path).check_paths()
    with pytest.raises(ConfigError):
        RunConfig(mds=tmp_path / "missing.md").check_paths()
    RunConfig(mds=tmp_path / "missing.md").check_paths("schema")
    with pytest.raises(ConfigError) as exc:
        RunConfig().require("fixture", "out")
    assert exc.value.field == "fixture"


def test_resolver_from_config_paths(tmp_path):
    (tmp_path / "schema.sch").write_text("R(A, B)\n", encoding="utf-8")
    (tmp_path / "mds.md").write_text("R[A]~R[A] -> R[B]<=>R[B]\n", encoding="utf-8")
    (tmp_path / "R.csv").write_text("A,B\na,x\na,y\n", encoding="utf-8")
    r = Resolver.from_config(RunConfig(schema=tmp_path / "schema.sch", data=tmp_path, mds=tmp_path / "mds.md"))
    assert len(r.instance) == 2
    assert r.mris().count == 2


def test_resolver_from_config_needs_inputs(tmp_path):
    with pytest.raises(ConfigError):
        Resolver.from_config(RunConfig())
    with pytest.raises(ConfigError):
        Resolver.from_config(RunConfig(schema=tmp_path))


def test_yaml_config(tmp_path):
    pytest.importorskip("yaml")
    path = tmp_path / "run.yaml"
    path.write_text("fixture: count\nstrategy: enumerate\nlimit: 50\n", encoding="utf-8")
    config = RunConfig.from_file(path)
    assert (config.fixture, config.strategy, config.limit) == ("count", "enumerate", 50)


@pytest.mark.parametrize("text", ["- a\n- b\n", "limit: [\n"])
def test_bad_yaml_config(tmp_path, text):
    pytest.importorskip("yaml")
    path = tmp_path / "run.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        RunConfig.from_file(path)


def test_missing_yaml_config(tmp_path):
    pytest.importorskip("yaml")
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "none.yaml")


def test_cli_flags_override_yaml(tmp_path, capsys):
    pytest.importorskip("yaml")
    from mdresolve.cli import main

    path = tmp_path / "run.yaml"
    path.write_text("fixture: simple_cycle\nlimit: 3\n", encoding="utf-8")
    assert main(["mris", "--config", str(path), "--limit", "5"]) == 0
    assert '"count": 5' in capsys.readouterr().out
