"""Similarity predicates and the per-pair registry."""

from __future__ import annotations

import itertools

import pytest

from mdresolve.engine.instance import INTEGER, TEXT, Attribute
from mdresolve.engine.similarity import EQ, SimilarityRegistry, SimilaritySpec, evaluate
from mdresolve.exceptions import ValueTagError


def distances_from(x: str, alphabet: str, max_len: int) -> dict[str, int]:
    """Edit distance from x to every string up to max_len, one DP row per prefix."""
    found: dict[str, int] = {}

    def extend(y: str, row: list[int]) -> None:
        found[y] = row[-1]
        if len(y) == max_len:
            return
        for c in alphabet:
            nxt = [row[0] + 1]
            for i, cx in enumerate(x, start=1):
                nxt.append(min(row[i] + 1, nxt[i - 1] + 1, row[i - 1] + (cx != c)))
            extend(y + c, nxt)

    extend("", list(range(len(x) + 1)))
    return found


def test_edit_distance_matches_dynamic_program():
    strings = list(distances_from("", "ab", 8))
    assert len(strings) == 511
    for x in strings:
        for y, d in distances_from(x, "ab", 8).items():
            assert evaluate(SimilaritySpec.edit_distance(d), x, y)
            if d:
                assert not evaluate(SimilaritySpec.edit_distance(d - 1), x, y), (x, y)


@pytest.mark.parametrize(
    "spec",
    [
        EQ,
        SimilaritySpec.edit_distance(1),
        SimilaritySpec.explicit_pairs([("a1", "c1"), ("b", "bb")], TEXT),
    ],
    ids=str,
)
def test_reflexive_and_symmetric(spec):
    values = ["a1", "c1", "b", "bb", "x"]
    for v in values:
        assert evaluate(spec, v, v)
    for x, y in itertools.combinations(values, 2):
        assert evaluate(spec, x, y) == evaluate(spec, y, x)


def test_explicit_pairs_are_not_transitive():
    spec = SimilaritySpec.explicit_pairs([("a", "b"), ("b", "c")])
    assert evaluate(spec, "a", "b")
    assert evaluate(spec, "c", "b")
    assert not evaluate(spec, "a", "c")


def test_integer_pairs_and_equality():
    spec = SimilaritySpec.explicit_pairs([(1, 2)], INTEGER)
    assert evaluate(spec, 2, 1)
    assert not evaluate(spec, 1, 3)
    assert evaluate(EQ, 5, 5)
    assert not evaluate(EQ, 5, 6)


def test_cross_tag_comparison_raises():
    with pytest.raises(ValueTagError):
        evaluate(EQ, "1", 1)
    with pytest.raises(TypeError):
        evaluate(SimilaritySpec.edit_distance(1), 1, 1)


def test_edit_distance_is_text_only():
    with pytest.raises(ValueTagError):
        SimilaritySpec.edit_distance(1).with_tag(INTEGER)
    with pytest.raises(ValueError):
        SimilaritySpec.edit_distance(-1)


def test_str_forms():
    assert str(EQ) == "eq"
    assert str(SimilaritySpec.edit_distance(2)) == "edit(2)"
    assert str(SimilaritySpec.explicit_pairs([("c1", "a1")])) == "pairs{a1~c1}"


def test_registry_is_orientation_free():
    ra, sb = Attribute("R", "A"), Attribute("S", "B")
    registry = SimilarityRegistry()
    spec = SimilaritySpec.explicit_pairs([("a1", "c1")])
    registry.register(ra, sb, spec)
    assert (sb, ra) in registry
    assert registry.lookup(sb, ra) == spec.with_tag(TEXT)
    assert registry.lookup(ra, Attribute("S", "C")) == EQ.with_tag(TEXT)


def test_registry_rejects_mixed_tags():
    with pytest.raises(ValueTagError):
        SimilarityRegistry().register(Attribute("R", "A"), Attribute("S", "N", INTEGER), EQ)
