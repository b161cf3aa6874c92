"""Equivalence partitions: tuple, set, attribute and tuple-attribute closures."""

from __future__ import annotations

from collections import Counter
from functools import cached_property
from typing import Any, Generic, Hashable, Iterable, Iterator, TypeVar

from ..exceptions import UnsupportedMDClassError
from .instance import Attribute, Instance, Position, TupleRef
from .mdspec import MDClass, MatchingDependency, MDSet, RhsPair

T = TypeVar("T", bound=Hashable)


class UnionFind(Generic[T]):
    """Disjoint sets with path compression and union by rank."""

    def __init__(self, elements: Iterable[T] = ()):
        self.parent: dict[T, T] = {}
        self.rank: Counter = Counter()
        for x in elements:
            self.add(x)

    def add(self, x: T) -> None:
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x: T) -> T:
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: T, y: T) -> None:
        px, py = self.find(x), self.find(y)
        if px == py:
            return
        if self.rank[px] < self.rank[py]:
            px, py = py, px
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1

    def __contains__(self, x: object) -> bool:
        return x in self.parent

    def __len__(self) -> int:
        return len(self.parent)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Attribute):
        return [x.relation, x.name]
    if isinstance(x, tuple):
        return list(x)
    return x


class EquivPartition(Generic[T]):
    """
    A finished equivalence partition.

    Classes are materialized on first use; each class is sorted and the
    class list is ordered by canonical (minimal) representative.
    """

    def __init__(self, universe: Iterable[T] = (), pairs: Iterable[tuple[T, T]] = ()):
        self._uf: UnionFind[T] = UnionFind(universe)
        for x, y in pairs:
            self._uf.union(x, y)

    @property
    def universe(self) -> frozenset[T]:
        return frozenset(self._uf.parent)

    @cached_property
    def _classes(self) -> tuple[tuple[T, ...], ...]:
        groups: dict[T, list[T]] = {}
        for x in self._uf.parent:
            groups.setdefault(self._uf.find(x), []).append(x)
        return tuple(sorted(tuple(sorted(g)) for g in groups.values()))

    @cached_property
    def _index(self) -> dict[T, int]:
        return {x: i for i, cls in enumerate(self._classes) for x in cls}

    def classes(self) -> tuple[tuple[T, ...], ...]:
        return self._classes

    def class_of(self, x: T) -> tuple[T, ...]:
        return self._classes[self._index[x]]

    def find(self, x: T) -> T:
        """Canonical representative: the minimal member of x's class."""
        return self.class_of(x)[0]

    def same_class(self, x: T, y: T) -> bool:
        return self._index[x] == self._index[y]

    def __contains__(self, x: object) -> bool:
        return x in self._uf

    def __iter__(self) -> Iterator[tuple[T, ...]]:
        return iter(self._classes)

    def __len__(self) -> int:
        return len(self._classes)

    def to_json(self) -> dict[str, Any]:
        return {"classes": [[_jsonable(x) for x in cls] for cls in self._classes]}

    def __repr__(self) -> str:
        return f"EquivPartition({len(self.universe)} elements, {len(self)} classes)"


AttrPartition = EquivPartition[Attribute]
TAPartition = EquivPartition[Position]


def similar_pairs(d: Instance, md: MatchingDependency) -> Iterator[tuple[TupleRef, TupleRef]]:
    """All (t1, t2) with t1 in the left relation, t2 in the right, and the premise true."""
    premise = md.matcher(d.schema)
    right = list(d.tuples(md.right_relation))
    for r1, t1 in d.tuples(md.left_relation):
        for r2, t2 in right:
            if premise(t1, t2):
                yield r1, r2


def matched_positions(
    d: Instance, mds: MDSet, hsc_mode: bool = False
) -> Iterator[tuple[Position, Position, int, RhsPair]]:
    """
    The ≈′ relation on positions.

    Yields ((t1, C), (t2, E), md index, pair) whenever t1, t2 satisfy the
    premise of an MD and (C, E) is one of its targets. In HSC mode the targets
    are drawn from the MD's whole connected component; pairs over another
    relation pair are applied in whichever orientation fits, else skipped.
    """
    for index, md in enumerate(mds):
        targets = mds.component_rhs(index) if hsc_mode else md.rhs
        oriented = []
        for pair in targets:
            if (pair.left.relation, pair.right.relation) == (md.left_relation, md.right_relation):
                oriented.append((pair, False))
            elif (pair.right.relation, pair.left.relation) == (md.left_relation, md.right_relation):
                oriented.append((pair, True))
        for r1, r2 in similar_pairs(d, md):
            for pair, swapped in oriented:
                c, e = (pair.right, pair.left) if swapped else (pair.left, pair.right)
                yield (
                    Position(r1.relation, r1.tuple_id, c.name),
                    Position(r2.relation, r2.tuple_id, e.name),
                    index,
                    pair,
                )


def tuple_closure(d: Instance, md: MatchingDependency) -> EquivPartition[TupleRef]:
    """
    Transitive closure of premise similarity over the tuples of both relations.

    Examples:
        With equality on A and three tuples sharing A = a, one class holds all three.
    """
    universe = d.refs(dict.fromkeys((md.left_relation, md.right_relation)))
    return EquivPartition(universe, similar_pairs(d, md))


def closure_of_set(parts: Iterable[EquivPartition[T]]) -> EquivPartition[T]:
    """Join of partitions: elements are equivalent if any chain of classes links them."""
    parts = list(parts)
    universe: list[T] = []
    pairs: list[tuple[T, T]] = []
    for part in parts:
        universe.extend(part.universe)
        for cls in part.classes():
            pairs.extend((cls[0], x) for x in cls[1:])
    return EquivPartition(universe, pairs)


def attribute_closure(mds: MDSet) -> AttrPartition:
    """Classes of target attributes linked through target pairs."""
    universe = [a for md in mds for a in sorted(md.rhs_attributes)]
    pairs = [(p.left, p.right) for md in mds for p in md.rhs]
    return EquivPartition(universe, pairs)


def tuple_attribute_closure(d: Instance, mds: MDSet, hsc_mode: bool) -> TAPartition:
    """
    Closure of ≈′ over the positions of changeable attributes.

    Args:
        d: The instance.
        mds: MD set; NonInteracting when hsc_mode is false, NonInteracting,
            SimpleCycle or HSC when it is true.
        hsc_mode: Draw target pairs from each MD's connected component.

    Raises:
        UnsupportedMDClassError: If the MD class does not fit the mode.
    """
    allowed = (
        {MDClass.NON_INTERACTING, MDClass.SIMPLE_CYCLE, MDClass.HSC}
        if hsc_mode
        else {MDClass.NON_INTERACTING}
    )
    if mds.md_class not in allowed:
        raise UnsupportedMDClassError(str(mds.md_class), "tuple_attribute_closure")
    universe = d.positions(mds.changeable_attributes)
    pairs = ((p1, p2) for p1, p2, _, _ in matched_positions(d, mds, hsc_mode))
    return EquivPartition(universe, pairs)


def class_value_counts(d: Instance, members: Iterable[Position]) -> Counter:
    """Positional value frequencies inside one class."""
    return Counter(d.value(p) for p in members)


def most_frequent(counts: Counter) -> list:
    """Every value reaching the maximal count, in ascending order."""
    if not counts:
        return []
    top = max(counts.values())
    return sorted(v for v, c in counts.items() if c == top)


def domain_groups(mds: MDSet) -> dict[tuple[str, str], int]:
    """Index of the attribute-closure class of every changeable (relation, attribute)."""
    groups = attribute_closure(mds)
    return {(a.relation, a.name): i for i, cls in enumerate(groups.classes()) for a in cls}
