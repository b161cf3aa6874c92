"""Query parsing, validation, evaluation and the ucajCQ test."""

from __future__ import annotations

import pytest

from mdresolve.engine.instance import Instance
from mdresolve.engine.query import Const, Var, cross_class_join, evaluate_query, is_ucaj
from mdresolve.exceptions import QueryParseError, UnknownRelationError
from mdresolve.io.md_parser import parse_mds
from mdresolve.io.query_parser import load_query, parse_query
from mdresolve.io.schema_parser import parse_schema


@pytest.fixture
def schema():
    return parse_schema("R(A, B, C)\nS(D, E)\nN(K:integer, V)")


@pytest.fixture
def d(schema):
    return Instance(schema, {
        "R": {0: ("a1", "b1", "c"), 1: ("a2", "b1", "d"), 2: ("a3", "b2", "c")},
        "S": {0: ("b1", "e1"), 1: ("b2", "e2")},
        "N": {0: (1, "one"), 1: (2, "two")},
    })


def test_parse_structure(schema):
    q = parse_query("Q(x, y) :- R(x, y, 'c'), S(y, z)", schema)
    assert q.name == "Q"
    assert q.free_variables == ("x", "y")
    assert q.bound_variables == ("z",)
    assert q.atoms[0].terms[2] == Const("c")
    assert q.atoms[1].terms == (Var("y"), Var("z"))


def test_parse_integer_constants_and_quotes(schema):
    q = parse_query("Q(v) :- N(2, v)", schema)
    assert q.atoms[0].terms[0] == Const(2)
    q = parse_query('Q(x) :- R(x, "it\'s", y)', schema)
    assert q.atoms[0].terms[1] == Const("it's")


def test_tail_conditions(schema):
    q = parse_query("Q(x) :- R(x, y, z), y = b1 or y = b2, z = x", schema)
    assert len(q.conditions) == 2
    first, second = q.conditions
    assert [str(eq) for eq in first] == ["y = 'b1'", "y = 'b2'"]
    assert second[0].term == Var("x")


def test_multiline_and_comments(schema):
    q = parse_query("# two atoms\nQ(x) :-\n  R(x, y, z),  # first\n  S(y, w).\n", schema)
    assert len(q.atoms) == 2


def test_boolean_query(schema, d):
    q = parse_query("Q() :- R(x, y, 'c'), R(z, y, 'd')", schema)
    assert q.is_boolean
    assert evaluate_query(q, d) == {()}
    q = parse_query("Q() :- R(x, 'b2', 'd')", schema)
    assert evaluate_query(q, d) == set()


@pytest.mark.parametrize(
    "text",
    [
        "Q(x) :- R(x, y)",
        "Q(w) :- R(x, y, z)",
        "Q('a') :- R(x, y, z)",
        "Q(x) :- R(x, y, z), q = 1",
        "Q(x) :- N(x, 'v'), R(x, y, z)",
        "Q(x) :- N('one', x)",
        "Q(x) :- R(x, y, z) extra",
        "Q(x) :- R(x, y, z",
        "Q(x) :- ",
        "Q(x) :- R(x, y, z), y = 1",
        "",
    ],
)
def test_invalid_queries(schema, text):
    with pytest.raises(QueryParseError):
        parse_query(text, schema)


def test_unknown_relation(schema):
    with pytest.raises(UnknownRelationError):
        parse_query("Q(x) :- T(x)", schema)


def test_without_schema_nothing_is_validated():
    q = parse_query("Q(x) :- T(x, y)")
    assert q.atoms[0].relation == "T"


def test_load_query(tmp_path, schema):
    path = tmp_path / "q.cq"
    path.write_text("Q(x) :- S(x, y)\n", encoding="utf-8")
    assert str(load_query(path, schema)) == "Q(x) :- S(x, y)"


def test_join_and_constants(schema, d):
    q = parse_query("Q(x, e) :- R(x, y, 'c'), S(y, e)", schema)
    assert evaluate_query(q, d) == {("a1", "e1"), ("a3", "e2")}


def test_repeated_variable_in_one_atom(schema):
    inst = Instance(schema, {"S": {0: ("x", "x"), 1: ("x", "y")}})
    q = parse_query("Q(v) :- S(v, v)", schema)
    assert evaluate_query(q, inst) == {("x",)}


def test_conditions_filter(schema, d):
    q = parse_query("Q(x) :- R(x, y, z), y = b2 or z = d", schema)
    assert evaluate_query(q, d) == {("a2",), ("a3",)}
    q = parse_query("Q(x) :- R(x, y, z), S(w, e), y = w, e = e2", schema)
    assert evaluate_query(q, d) == {("a3",)}


def test_integer_values(schema, d):
    q = parse_query("Q(k) :- N(k, 'two')", schema)
    assert evaluate_query(q, d) == {(2,)}


def test_ucaj(schema):
    mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]", schema)
    assert is_ucaj(parse_query("Q(x, y) :- R(x, y, z)", schema), mds)
    assert is_ucaj(parse_query("Q(y) :- R(x, y, z), R(w, y, v)", schema), mds)
    assert is_ucaj(parse_query("Q(x) :- R(x, y, z), R(x, v, w)", schema), mds)
    verdict = is_ucaj(parse_query("Q(x, w) :- R(x, y, z), R(w, y, v)", schema), mds)
    assert not verdict
    assert verdict.witness == "y"


def test_ucaj_counts_occurrences_across_relations(schema):
    mds = parse_mds("R[A]~S[D] -> R[B]<=>S[E]", schema)
    verdict = is_ucaj(parse_query("Q(x) :- R(x, y, z), S(w, y)", schema), mds)
    assert not verdict and verdict.witness == "y"
    assert is_ucaj(parse_query("Q(y) :- R(x, y, z), S(x, w)", schema), mds)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Q(y, w) :- R(x, y, z), R(x2, w, z)", "z"),
        ("Q(y, w) :- R(x, y, z), S(z, e), R(x2, w, e)", "z"),
        ("Q(y, w) :- R(x, y, z), R(x, w, z2)", None),
        ("Q(y, w, z) :- R(x, y, z), R(x2, w, z)", None),
        ("Q(y) :- R(x, y, z), R(x2, w, z)", None),
    ],
)
def test_cross_class_join(schema, text, expected):
    mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]", schema)
    assert cross_class_join(parse_query(text, schema), mds) == expected


def test_premise_join_counts_only_for_a_lone_shared_premise(schema):
    mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]\nS[D]~S[D] -> S[E]<=>S[E]", schema)
    q = parse_query("Q(y, w) :- R(x, y, z), R(x, w, z2)", schema)
    assert cross_class_join(q, mds) == "x"
