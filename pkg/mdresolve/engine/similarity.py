"""Similarity predicates for matching-dependency premises."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import Levenshtein

from ..exceptions import ValueTagError
from .instance import TEXT, Attribute, Value, check_tag, value_tag

EQUALITY = "eq"
EDIT_DISTANCE = "edit"
EXPLICIT_PAIRS = "pairs"
SIMILARITY_KINDS = (EQUALITY, EDIT_DISTANCE, EXPLICIT_PAIRS)


@dataclass(frozen=True)
class SimilaritySpec:
    """
    A symmetric, equality-subsuming similarity predicate.

    Explicit pairs are stored unordered; reflexive pairs are implied.
    ``tag`` restricts the values the predicate accepts (None = any tag,
    only for equality).
    """
    kind: str = EQUALITY
    max_distance: int = 0
    pairs: frozenset[frozenset[Value]] = field(default_factory=frozenset)
    tag: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SIMILARITY_KINDS:
            raise ValueError(f"Unknown similarity kind: {self.kind!r}")
        if self.kind == EDIT_DISTANCE:
            if self.max_distance < 0:
                raise ValueError("edit distance bound must be non-negative")
            if self.tag not in (None, TEXT):
                raise ValueTagError(TEXT, self.tag, "edit-distance similarity")
            object.__setattr__(self, "tag", TEXT)
        if self.kind == EXPLICIT_PAIRS and self.tag is not None:
            for pair in self.pairs:
                for v in pair:
                    check_tag(v, self.tag, "explicit similarity pair")

    @classmethod
    def equality(cls, tag: Optional[str] = None) -> SimilaritySpec:
        return cls(EQUALITY, tag=tag)

    @classmethod
    def edit_distance(cls, max_distance: int) -> SimilaritySpec:
        return cls(EDIT_DISTANCE, max_distance=max_distance, tag=TEXT)

    @classmethod
    def explicit_pairs(
        cls, pairs: Iterable[tuple[Value, Value]], tag: Optional[str] = None
    ) -> SimilaritySpec:
        stored = frozenset(frozenset(p) for p in pairs if p[0] != p[1])
        return cls(EXPLICIT_PAIRS, pairs=stored, tag=tag)

    def with_tag(self, tag: str) -> SimilaritySpec:
        """Bind the spec to the value tag of the attribute pair it guards."""
        if self.tag == tag:
            return self
        if self.kind == EDIT_DISTANCE:
            raise ValueTagError(TEXT, tag, "edit-distance similarity")
        return SimilaritySpec(self.kind, self.max_distance, self.pairs, tag)

    def __str__(self) -> str:
        if self.kind == EQUALITY:
            return "eq"
        if self.kind == EDIT_DISTANCE:
            return f"edit({self.max_distance})"
        rendered = sorted(sorted(pair) for pair in self.pairs)
        return "pairs{" + ", ".join(f"{a}~{b}" for a, b in rendered) + "}"


EQ = SimilaritySpec.equality()


def evaluate(spec: SimilaritySpec, x: Value, y: Value) -> bool:
    """
    Truth of x ≈ y under spec.

    Raises:
        ValueTagError: If x and y carry different tags or not the spec's tag.
    """
    tag = value_tag(x)
    if value_tag(y) != tag:
        raise ValueTagError(tag, y, "similarity comparison")
    if spec.tag is not None and tag != spec.tag:
        raise ValueTagError(spec.tag, x, "similarity comparison")
    if x == y:
        return True
    if spec.kind == EQUALITY:
        return False
    if spec.kind == EDIT_DISTANCE:
        return Levenshtein.distance(x, y) <= spec.max_distance
    return frozenset((x, y)) in spec.pairs


class SimilarityRegistry:
    """
    Default similarity per attribute pair.

    MD premises that do not name a spec fall back to the registered default
    for their attribute pair (in either orientation), then to equality.
    """

    def __init__(self):
        self._specs: dict[frozenset[Attribute], SimilaritySpec] = {}

    def register(self, left: Attribute, right: Attribute, spec: SimilaritySpec) -> None:
        if left.tag != right.tag:
            raise ValueTagError(left.tag, right.tag, f"similarity {left}~{right}")
        self._specs[frozenset((left, right))] = spec.with_tag(left.tag)

    def lookup(self, left: Attribute, right: Attribute) -> SimilaritySpec:
        spec = self._specs.get(frozenset((left, right)))
        return spec if spec is not None else EQ.with_tag(left.tag)

    def __contains__(self, pair: object) -> bool:
        if not isinstance(pair, tuple) or len(pair) != 2:
            return False
        return frozenset(pair) in self._specs

    def __len__(self) -> int:
        return len(self._specs)
