"""Matching dependencies, standard form, the MD-graph and its classification."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence

import networkx as nx

from .instance import Attribute, Schema, Value
from .similarity import SimilaritySpec, evaluate

logger = logging.getLogger(__name__)


class LhsPair(NamedTuple):
    """A similarity premise R[A] ≈ S[B]."""
    left: Attribute
    right: Attribute
    similarity: SimilaritySpec

    @property
    def attributes(self) -> frozenset[Attribute]:
        return frozenset((self.left, self.right))

    def __str__(self) -> str:
        return f"{self.left}~{self.right}"


class RhsPair(NamedTuple):
    """A matching target R[C] ⇌ S[E]."""
    left: Attribute
    right: Attribute

    @property
    def attributes(self) -> frozenset[Attribute]:
        return frozenset((self.left, self.right))

    def __str__(self) -> str:
        return f"{self.left}<=>{self.right}"


@dataclass(frozen=True)
class MatchingDependency:
    """
    R[A1] ≈ S[B1] ∧ ... → R[C1] ⇌ S[E1] ∧ ...

    Every left attribute belongs to ``left_relation`` and every right
    attribute to ``right_relation``; the two may coincide.
    """
    left_relation: str
    right_relation: str
    lhs: tuple[LhsPair, ...]
    rhs: tuple[RhsPair, ...]

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise ValueError("a matching dependency needs premises and targets")
        for pair in (*self.lhs, *self.rhs):
            if pair.left.relation != self.left_relation or pair.right.relation != self.right_relation:
                raise ValueError(f"pair {pair} does not span {self.left_relation}/{self.right_relation}")
            if pair.left.tag != pair.right.tag:
                raise ValueError(f"pair {pair} mixes {pair.left.tag} and {pair.right.tag}")

    @property
    def lhs_attributes(self) -> frozenset[Attribute]:
        return frozenset(a for p in self.lhs for a in (p.left, p.right))

    @property
    def rhs_attributes(self) -> frozenset[Attribute]:
        return frozenset(a for p in self.rhs for a in (p.left, p.right))

    @property
    def lhs_key(self) -> tuple:
        """Identity of the premise: relation pair, pairs and their similarities."""
        return (self.left_relation, self.right_relation, frozenset(self.lhs))

    def matcher(self, schema: Schema) -> Callable[[Sequence[Value], Sequence[Value]], bool]:
        """Compile the premise into a predicate over (left row, right row)."""
        left = schema.relation(self.left_relation)
        right = schema.relation(self.right_relation)
        checks = [
            (left.index(p.left.name), right.index(p.right.name), p.similarity)
            for p in self.lhs
        ]

        def premise(t1: Sequence[Value], t2: Sequence[Value]) -> bool:
            return all(evaluate(spec, t1[i], t2[j]) for i, j, spec in checks)

        return premise

    def __str__(self) -> str:
        lhs = ", ".join(str(p) for p in self.lhs)
        rhs = ", ".join(str(p) for p in self.rhs)
        sims = ", ".join(str(p.similarity) for p in self.lhs)
        return f"{lhs} -> {rhs} sim {sims}"


def normalize(dependencies: Iterable[MatchingDependency]) -> tuple[MatchingDependency, ...]:
    """
    Bring MDs into standard form.

    MDs with identical premises are merged into one whose targets are the
    union of theirs, in order of first appearance.
    """
    merged: dict[tuple, MatchingDependency] = {}
    for md in dependencies:
        key = md.lhs_key
        if key not in merged:
            merged[key] = md
            continue
        base = merged[key]
        rhs = base.rhs + tuple(p for p in md.rhs if p not in base.rhs)
        merged[key] = MatchingDependency(base.left_relation, base.right_relation, base.lhs, rhs)
    return tuple(merged.values())


class MDClass(str, Enum):
    """Shape of an MD set's graph, most specific first."""
    NON_INTERACTING = "NonInteracting"
    SIMPLE_CYCLE = "SimpleCycle"
    HSC = "HSC"
    DAG = "DAG"
    GENERAL = "GeneralInteracting"

    def __str__(self) -> str:
        return self.value


SUPPORTED_CLASSES = frozenset({MDClass.NON_INTERACTING, MDClass.SIMPLE_CYCLE, MDClass.HSC})


@dataclass(frozen=True)
class MDSet:
    """An MD set in standard form, with its MD-graph."""
    dependencies: tuple[MatchingDependency, ...]
    schema: Optional[Schema] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dependencies", normalize(self.dependencies))

    def __iter__(self) -> Iterator[MatchingDependency]:
        return iter(self.dependencies)

    def __len__(self) -> int:
        return len(self.dependencies)

    def __getitem__(self, index: int) -> MatchingDependency:
        return self.dependencies[index]

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Edge m1 → m2 iff RHS(m1) ∩ LHS(m2) ≠ ∅ as attribute sets."""
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.dependencies)))
        for i, m1 in enumerate(self.dependencies):
            for j, m2 in enumerate(self.dependencies):
                if m1.rhs_attributes & m2.lhs_attributes:
                    g.add_edge(i, j)
        return g

    @cached_property
    def md_class(self) -> MDClass:
        return classify(self)

    @cached_property
    def changeable_attributes(self) -> frozenset[Attribute]:
        return frozenset(a for md in self.dependencies for a in md.rhs_attributes)

    def components(self) -> list[tuple[int, ...]]:
        """Weakly connected components of the MD-graph, as sorted index tuples."""
        return sorted(tuple(sorted(c)) for c in nx.weakly_connected_components(self.graph))

    def component_rhs(self, index: int) -> tuple[RhsPair, ...]:
        """Targets of every MD in the same connected component as MD ``index``."""
        for component in self.components():
            if index in component:
                pairs: list[RhsPair] = []
                for j in component:
                    pairs.extend(p for p in self.dependencies[j].rhs if p not in pairs)
                return tuple(pairs)
        raise IndexError(index)

    def __str__(self) -> str:
        return "\n".join(str(md) for md in self.dependencies)


def _unordered(pairs: Iterable[LhsPair | RhsPair]) -> set[frozenset[Attribute]]:
    return {p.attributes for p in pairs}


def is_simple_step(m1: MatchingDependency, m2: MatchingDependency) -> bool:
    """
    Successive MDs of a simple cycle: m2's premise pairs are target pairs of
    m1 and do not occur in m1's premise.
    """
    lhs2 = _unordered(m2.lhs)
    return lhs2 <= _unordered(m1.rhs) and not (lhs2 & _unordered(m1.lhs))


def simple_cycles(mds: MDSet) -> list[list[int]]:
    """Directed cycles of the MD-graph that satisfy the simple-cycle pair condition."""
    found = []
    for cycle in nx.simple_cycles(mds.graph):
        if len(cycle) < 2:
            continue
        steps = zip(cycle, cycle[1:] + cycle[:1])
        if all(is_simple_step(mds[a], mds[b]) for a, b in steps):
            found.append(cycle)
    return found


def classify(mds: MDSet) -> MDClass:
    """
    Most specific class of an MD set.

    NonInteracting if the graph has no edges; SimpleCycle if it is one simple
    cycle through every MD; HSC if every MD lies on some simple cycle; DAG if
    acyclic; GeneralInteracting otherwise.
    """
    g = mds.graph
    if g.number_of_edges() == 0:
        verdict = MDClass.NON_INTERACTING
    else:
        cycles = simple_cycles(mds)
        covered = {v for c in cycles for v in c}
        one_cycle = (
            nx.is_weakly_connected(g)
            and all(g.in_degree(v) == 1 and g.out_degree(v) == 1 for v in g)
            and any(len(c) == len(mds) for c in cycles)
        )
        if one_cycle:
            verdict = MDClass.SIMPLE_CYCLE
        elif covered == set(g.nodes):
            verdict = MDClass.HSC
        elif nx.is_directed_acyclic_graph(g):
            verdict = MDClass.DAG
        else:
            verdict = MDClass.GENERAL
    logger.info("classified %d MD(s) as %s", len(mds), verdict)
    return verdict
