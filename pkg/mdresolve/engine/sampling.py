"""Seeded random instances, MD-set templates and ucajCQ queries."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Optional, Sequence

from .instance import INTEGER, TEXT, Attribute, Instance, RelationSchema, Schema, Value
from .mdspec import LhsPair, MatchingDependency, MDSet, RhsPair
from .query import Atom, Const, ConjunctiveQuery, Var, cross_class_join, is_ucaj
from .similarity import EQ, SimilaritySpec

Template = Callable[[random.Random], MDSet]

# Values shared by every attribute of the cross-relation cycle
SHARED_DOMAIN = ("v0", "v1", "w0")


def relation(name: str, *attributes: str, tag: str = TEXT) -> RelationSchema:
    """Shorthand for a relation whose attributes share one tag."""
    return RelationSchema(name, tuple(Attribute(name, a, tag) for a in attributes))


def domain_of(attr: Attribute, values_per_attribute: int) -> list[Value]:
    """The sampling domain of an attribute: a0, a1, ... or 0, 1, ..."""
    if attr.tag == INTEGER:
        return list(range(values_per_attribute))
    return [f"{attr.name.lower()}{i}" for i in range(values_per_attribute)]


def random_instance(
    schema: Schema,
    rng: random.Random,
    n_tuples: int = 4,
    values_per_attribute: int = 2,
    domain: Optional[Sequence[Value]] = None,
) -> Instance:
    """
    n_tuples rows per relation, each value drawn from its attribute's domain.

    With ``domain`` every attribute draws from that one sequence instead,
    so values can meet across attributes and relations.
    """
    rows = {}
    for rel in schema.relations:
        domains = [list(domain) if domain is not None else domain_of(a, values_per_attribute) for a in rel.attributes]
        rows[rel.name] = {
            i: tuple(rng.choice(dom) for dom in domains)
            for i in range(n_tuples)
        }
    return Instance(schema, rows)


def random_similarity(
    attr: Attribute,
    rng: random.Random,
    values_per_attribute: int = 2,
    domain: Optional[Sequence[Value]] = None,
) -> SimilaritySpec:
    """Equality, edit distance 1 (text only) or a random set of explicit pairs over the domain."""
    kinds = ["eq", "pairs"] + (["edit"] if attr.tag == TEXT else [])
    kind = rng.choice(kinds)
    if kind == "eq":
        return EQ.with_tag(attr.tag)
    if kind == "edit":
        return SimilaritySpec.edit_distance(1)
    pool = list(domain) if domain is not None else domain_of(attr, values_per_attribute + 1)
    candidates = list(itertools.combinations(pool, 2))
    chosen = [p for p in candidates if rng.random() < 0.5]
    return SimilaritySpec.explicit_pairs(chosen, attr.tag)


def self_md(rel: RelationSchema, premise: list[tuple[str, SimilaritySpec]], targets: list[str]) -> MatchingDependency:
    """R[A]~R[A], ... -> R[C]<=>R[C], ... on a single relation."""
    lhs = tuple(LhsPair(rel.attribute(a), rel.attribute(a), spec) for a, spec in premise)
    rhs = tuple(RhsPair(rel.attribute(c), rel.attribute(c)) for c in targets)
    return MatchingDependency(rel.name, rel.name, lhs, rhs)


def non_interacting(rng: random.Random) -> MDSet:
    """R(A,B,C) with A-similar tuples matched on B, and sometimes also on C."""
    rel = relation("R", "A", "B", "C")
    targets = ["B", "C"] if rng.random() < 0.4 else ["B"]
    md = self_md(rel, [("A", random_similarity(rel.attribute("A"), rng))], targets)
    return MDSet((md,), Schema((rel,)))


def simple_cycle(rng: random.Random) -> MDSet:
    """R(A,B[,C]) with A-similar tuples matched on B and B-similar tuples matched on A."""
    rel = relation("R", "A", "B", "C") if rng.random() < 0.5 else relation("R", "A", "B")
    m1 = self_md(rel, [("A", random_similarity(rel.attribute("A"), rng))], ["B"])
    m2 = self_md(rel, [("B", random_similarity(rel.attribute("B"), rng))], ["A"])
    return MDSet((m1, m2), Schema((rel,)))


def hsc(rng: random.Random) -> MDSet:
    """Two disjoint two-MD cycles, on R(A,B) and on S(C,D)."""
    r, s = relation("R", "A", "B"), relation("S", "C", "D")
    mds = (
        self_md(r, [("A", random_similarity(r.attribute("A"), rng))], ["B"]),
        self_md(r, [("B", random_similarity(r.attribute("B"), rng))], ["A"]),
        self_md(s, [("C", random_similarity(s.attribute("C"), rng))], ["D"]),
        self_md(s, [("D", random_similarity(s.attribute("D"), rng))], ["C"]),
    )
    return MDSet(mds, Schema((r, s)))


def cross_simple_cycle(rng: random.Random) -> MDSet:
    """R[A]~S[B] -> R[C]<=>S[E] and back, with R(A,C) and S(B,E) sharing SHARED_DOMAIN."""
    r, s = relation("R", "A", "C"), relation("S", "B", "E")
    pool = SHARED_DOMAIN + ("v2",)
    m1 = MatchingDependency(
        "R", "S",
        (LhsPair(r.attribute("A"), s.attribute("B"), random_similarity(r.attribute("A"), rng, domain=pool)),),
        (RhsPair(r.attribute("C"), s.attribute("E")),),
    )
    m2 = MatchingDependency(
        "R", "S",
        (LhsPair(r.attribute("C"), s.attribute("E"), random_similarity(r.attribute("C"), rng, domain=pool)),),
        (RhsPair(r.attribute("A"), s.attribute("B")),),
    )
    return MDSet((m1, m2), Schema((r, s)))


def key_shape(rng: random.Random) -> MDSet:
    """R[A]=R[A] -> R[B]<=>R[B] (, R[C]<=>R[C]) covering every attribute of R."""
    rel = relation("R", "A", "B", "C") if rng.random() < 0.5 else relation("R", "A", "B")
    md = self_md(rel, [("A", EQ.with_tag(TEXT))], list(rel.attribute_names[1:]))
    return MDSet((md,), Schema((rel,)))


TEMPLATES: dict[str, Template] = {
    "non-interacting": non_interacting,
    "simple-cycle": simple_cycle,
    "hsc": hsc,
    "cross-simple-cycle": cross_simple_cycle,
    "key-shape": key_shape,
}


def random_query(
    mds: MDSet,
    rng: random.Random,
    max_atoms: int = 2,
    values_per_attribute: int = 2,
    attempts: int = 20,
) -> ConjunctiveQuery:
    """
    A ucajCQ over the first relation of the MD set's schema.

    Joins only ever share a variable within one column. Constants appear
    only on unchangeable attributes, and joins that could link answers
    across classes are redrawn, so the result is also rewritable.
    """
    schema = mds.schema
    rel = schema.relations[0]
    changeable = mds.changeable_attributes
    for _ in range(attempts):
        n_atoms = rng.randint(1, max_atoms)
        atoms = []
        for _ in range(n_atoms):
            terms = []
            for attr in rel.attributes:
                if attr not in changeable and rng.random() < 0.2:
                    terms.append(Const(rng.choice(domain_of(attr, values_per_attribute))))
                else:
                    terms.append(Var(f"{attr.name.lower()}{rng.randrange(n_atoms)}"))
            atoms.append(Atom(rel.name, tuple(terms)))
        names = list(dict.fromkeys(t.name for a in atoms for t in a.terms if isinstance(t, Var)))
        head = tuple(Var(v) for v in names if rng.random() < 0.5)
        q = ConjunctiveQuery("Q", head, tuple(atoms))
        if is_ucaj(q, mds, schema) and cross_class_join(q, mds, schema) is None:
            return q
    terms = tuple(Var(a.name.lower()) for a in rel.attributes)
    return ConjunctiveQuery("Q", terms, (Atom(rel.name, terms),))
