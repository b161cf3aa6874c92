"""Count-based rewriting and evaluation of the rewritten form."""

from __future__ import annotations

import math
import re

import pytest

from mdresolve.engine.instance import Instance, Schema
from mdresolve.engine.query import Atom, ConjunctiveQuery, Var
from mdresolve.engine.rewrite import EvalStats, RewrittenAtom, eval_rewritten, rewrite
from mdresolve.engine.sampling import relation
from mdresolve.exceptions import NotUcajError, RewriteError, UnsupportedMDClassError
from mdresolve.io.md_parser import parse_mds
from mdresolve.io.query_parser import parse_query

_VARIABLE = re.compile(r"(?<![A-Za-z0-9_])[a-z][a-z0-9_]*[′″]*")


def normalized(text: str) -> str:
    """Rename variables by order of first appearance and drop whitespace."""
    names: dict[str, str] = {}

    def rename(m: re.Match) -> str:
        return names.setdefault(m.group(0), f"v{len(names)}")

    return re.sub(r"\s+", "", _VARIABLE.sub(rename, text))


COUNT_FORMULA = (
    "Q′(x, y, z) :- ∃u (R(x, u, z) ∧ ∀w ["
    "Count{(x1, y, z1) | TS((x, u, z), R[B], (x1, y, z1), R[B]) ∧ R(x1, y, z1)}"
    " > "
    "Count{(x1, w, z1) | TS((x, u, z), R[B], (x1, w, z1), R[B]) ∧ R(x1, w, z1) ∧ w ≠ y}"
    "])"
)


def test_count_example_text(bundled):
    r = bundled("count")
    rq = rewrite(r.queries["q"], r.mds, r.instance.schema)
    assert normalized(rq.to_text()) == normalized(COUNT_FORMULA)
    assert "y′" in rq.to_text() and "y″" in rq.to_text()


def test_count_example_answers(bundled):
    r = bundled("count")
    rq = rewrite(r.queries["q"], r.mds)
    assert eval_rewritten(rq, r.instance, r.mds) == {
        ("a1", "b2", "c1"),
        ("a1", "b2", "c2"),
        ("a1", "b2", "c3"),
    }


def test_three_relation_rewrite(bundled):
    r = bundled("three_relation")
    rq = rewrite(r.queries["q"], r.mds)
    rewritten = rq.rewritten_atoms
    assert len(rewritten) == 1
    block = rewritten[0]
    assert block.original.relation == "R"
    (challenge,) = block.challenges
    assert len(challenge.support) == 3
    assert len(challenge.rivals) == 3
    assert [t.attribute.relation for t in challenge.support] == ["R", "S", "U"]
    passthrough = [b for b in rq.blocks if isinstance(b, Atom)]
    assert [str(b) for b in passthrough] == ["S(t, u, z)", "U(p, q)"]

    text = rq.to_text()
    assert text.startswith("Q′(x, y, z) :- ∃t, u, p, q (")
    assert text.count("Count{") == 6
    assert "S(t′, y, z′)" in text and "U(p′, y)" in text
    assert eval_rewritten(rq, r.instance, r.mds) == {("a1", "b2", "c1")}


def test_json_form(bundled):
    r = bundled("three_relation")
    payload = rewrite(r.queries["q"], r.mds).to_dict()
    assert payload["hsc_mode"] is False
    assert payload["self_join_classes"] == []
    kinds = [("atom" in b and len(b) == 1) for b in payload["blocks"]]
    assert kinds == [False, True, True]
    assert len(payload["blocks"][0]["challenges"][0]["support"]) == 3


def test_atoms_without_changeable_free_variables_pass_through(bundled):
    r = bundled("count")
    q = parse_query("Q(x, z) :- R(x, y, z)", r.instance.schema)
    rq = rewrite(q, r.mds)
    assert rq.blocks == q.atoms
    assert eval_rewritten(rq, r.instance, r.mds) == {("a1", "c1"), ("a1", "c2"), ("a1", "c3")}


def test_tie_yields_no_answer(bundled):
    r = bundled("two_mri")
    rq = rewrite(r.queries["q1"], r.mds)
    assert isinstance(rq.blocks[0], RewrittenAtom)
    assert eval_rewritten(rq, r.instance, r.mds) == set()


def test_simple_cycle_uses_hsc_mode(bundled):
    r = bundled("simple_cycle")
    q = parse_query("Q(x, y) :- R(x, y, z)", r.instance.schema)
    rq = rewrite(q, r.mds)
    assert rq.hsc_mode
    assert [str(a) for cls in rq.self_join_classes for a in cls] == []
    assert eval_rewritten(rq, r.instance, r.mds) == set()


def test_not_ucaj_is_rejected(bundled):
    r = bundled("cqa_hardness")
    with pytest.raises(NotUcajError) as exc:
        rewrite(r.queries["q"], r.mds)
    assert exc.value.variable == "y"


def test_conditions_and_changeable_constants_are_rejected(bundled):
    r = bundled("two_mri")
    with pytest.raises(RewriteError):
        rewrite(r.queries["q2"], r.mds)
    with pytest.raises(RewriteError):
        rewrite(parse_query("Q(x) :- R(x, 'b1')", r.instance.schema), r.mds)


def test_unsupported_class(bundled):
    r = bundled("two_md")
    q = parse_query("Q(x) :- R(x, y, z)", r.instance.schema)
    with pytest.raises(UnsupportedMDClassError):
        rewrite(q, r.mds)


def test_fresh_names_avoid_query_variables():
    schema = Schema((relation("R", "A", "B"),))
    mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]", schema)
    q = ConjunctiveQuery("Q", (Var("y"), Var("y′")), (Atom("R", (Var("y′"), Var("y"))),))
    block = rewrite(q, mds).rewritten_atoms[0]
    assert block.challenges[0].renamed == "y′1"
    assert str(block.renamed) == "R(y′, y′1)"


def _count_instance(n: int) -> tuple[Instance, Schema]:
    schema = Schema((relation("R", "A", "B", "C"),))
    rows = {i: (f"a{i % 3}", f"b{i % 2}", f"c{i}") for i in range(n)}
    return Instance(schema, {"R": rows}), schema


def test_evaluation_cost_grows_polynomially():
    probes = []
    for n in (8, 16, 32, 64):
        d, schema = _count_instance(n)
        mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]", schema)
        rq = rewrite(parse_query("Q(x, y, z) :- R(x, y, z)", schema), mds)
        stats = EvalStats()
        eval_rewritten(rq, d, mds, stats)
        probes.append(stats.probes)
    for small, large in zip(probes, probes[1:]):
        assert math.log2(large / small) <= 4


def test_bound_join_across_classes_is_rejected():
    schema = Schema((relation("R", "A", "B", "C"),))
    mds = parse_mds("R[A]~R[A] -> R[B]<=>R[B]", schema)
    q = parse_query("Q(y, w) :- R(x, y, z), R(x2, w, z)", schema)
    with pytest.raises(RewriteError, match="variable z"):
        rewrite(q, mds)
