"""Resolved answers: enumeration and rewriting agree."""

from __future__ import annotations

import random

import pytest

from mdresolve.engine.answers import AUTO, ENUMERATE, REWRITE, answers_over, minimal_instances, resolved_answers
from mdresolve.engine.instance import Instance, Schema
from mdresolve.engine.query import evaluate_query
from mdresolve.engine.resolve import is_stable
from mdresolve.engine.sampling import TEMPLATES, random_instance, random_query, relation
from mdresolve.exceptions import EnumerationTruncatedError, NoStrategyError
from mdresolve.io.md_parser import parse_mds
from mdresolve.io.query_parser import parse_query


def test_two_mri_queries(bundled):
    r = bundled("two_mri")
    assert r.answer(r.queries["q1"]) == set()
    assert r.answer(r.queries["q2"]) == {("a1",)}
    assert r.answer(r.queries["q2"], ENUMERATE) == {("a1",)}


def test_rewrite_only_refuses_conditions(bundled):
    r = bundled("two_mri")
    with pytest.raises(NoStrategyError) as exc:
        r.answer(r.queries["q2"], REWRITE)
    assert "rewrite" in exc.value.reasons[0]


def test_count_fixture_both_strategies(bundled):
    r = bundled("count")
    expected = {("a1", "b2", "c1"), ("a1", "b2", "c2"), ("a1", "b2", "c3")}
    assert r.answer(r.queries["q"], REWRITE) == expected
    assert r.answer(r.queries["q"], ENUMERATE) == expected


def test_three_relation_both_strategies(bundled):
    r = bundled("three_relation")
    assert r.answer(r.queries["q"], REWRITE) == r.answer(r.queries["q"], ENUMERATE) == {("a1", "b2", "c1")}


def test_stable_instance_answers_are_plain_answers(bundled):
    r = bundled("count")
    stable = r.resolve()
    assert is_stable(stable, r.mds)
    q = r.queries["q"]
    assert resolved_answers(q, stable, r.mds) == evaluate_query(q, stable)


def test_not_ucaj_falls_back_to_enumeration(bundled):
    r = bundled("cqa_hardness")
    assert r.answer(r.queries["q"]) == set()
    with pytest.raises(NoStrategyError):
        r.answer(r.queries["q"], REWRITE)


def test_join_across_classes_is_answered_by_enumeration():
    schema = Schema((relation("R", "A", "B", "C"),))
    d = Instance(schema, {"R": {
        1: ("a0", "v", "c0"), 4: ("a0", "w", "c1"), 2: ("a1", "w", "c0"), 3: ("a2", "v", "c1"),
    }})
    mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]", schema)
    q = parse_query("Q(y, w) :- R(x, y, z), R(x2, w, z)", schema)
    expected = {("v", "v"), ("v", "w"), ("w", "v"), ("w", "w")}
    assert resolved_answers(q, d, mds, AUTO) == expected
    assert resolved_answers(q, d, mds, ENUMERATE) == expected
    with pytest.raises(NoStrategyError) as exc:
        resolved_answers(q, d, mds, REWRITE)
    assert "variable z" in exc.value.reasons[0]


def test_dag_is_answered_by_oracle(bundled):
    r = bundled("two_md")
    q = parse_query("Q(x, z) :- R(x, y, z)", r.instance.schema)
    with pytest.warns(UserWarning):
        assert r.answer(q) == {("a", "e")}


def test_truncated_enumeration_is_an_error(bundled):
    r = bundled("simple_cycle")
    q = parse_query("Q(x) :- R(x, y, z)", r.instance.schema)
    with pytest.raises(EnumerationTruncatedError):
        resolved_answers(q, r.instance, r.mds, ENUMERATE, limit=3)


def test_unknown_strategy(bundled):
    r = bundled("count")
    with pytest.raises(ValueError):
        r.answer(r.queries["q"], "guess")


def test_answers_over_empty_list():
    assert answers_over(parse_query("Q() :- R(x)"), []) == set()


def test_enumerate_equals_rewrite_on_random_instances():
    rng = random.Random(2024)
    checked = 0
    for _ in range(120):
        mds = TEMPLATES["non-interacting"](rng)
        values = rng.randint(2, 3)
        d = random_instance(mds.schema, rng, n_tuples=rng.randint(2, 5), values_per_attribute=values)
        q = random_query(mds, rng, values_per_attribute=values)
        by_rewrite = resolved_answers(q, d, mds, REWRITE)
        by_mris = answers_over(q, minimal_instances(d, mds).mris)
        assert by_rewrite == by_mris, f"{q}\n{mds}\n{d.to_dict()}"
        checked += 1
    assert checked == 120
