"""
Count-based rewriting of ucajCQs and an interpreter for the rewritten form.

A rewritten atom keeps its unchangeable positions and renames every free
variable on a changeable attribute. The free variable is then pinned by a
universally quantified comparison: its value must occur in the
tuple-attribute class of the renamed position strictly more often than
any other value.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Union

from ..exceptions import NotUcajError, RewriteError, UnsupportedMDClassError
from .closure import TAPartition, attribute_closure, tuple_attribute_closure
from .instance import Attribute, Instance, Position, Schema, Value
from .mdspec import SUPPORTED_CLASSES, MDClass, MDSet
from .query import Atom, Const, ConjunctiveQuery, Var, cross_class_join, is_ucaj, match_atom

logger = logging.getLogger(__name__)

PRIME = "′"
DOUBLE_PRIME = "″"


@dataclass(frozen=True)
class CountTerm:
    """Count{ū | TS(anchor, ū at attribute) ∧ R_j(ū) [∧ value ≠ excluded]}."""
    atom: Atom
    attribute: Attribute
    value: str
    excluded: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "atom": str(self.atom),
            "attribute": str(self.attribute),
            "value": self.value,
            "excluded": self.excluded,
        }


@dataclass(frozen=True)
class Challenge:
    """∀challenger [Σ support(variable) > Σ rivals(challenger)] for one renamed position."""
    variable: str
    attribute: Attribute
    renamed: str
    challenger: str
    support: tuple[CountTerm, ...]
    rivals: tuple[CountTerm, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "variable": self.variable,
            "attribute": str(self.attribute),
            "renamed": self.renamed,
            "challenger": self.challenger,
            "support": [t.to_dict() for t in self.support],
            "rivals": [t.to_dict() for t in self.rivals],
        }


@dataclass(frozen=True)
class RewrittenAtom:
    """∃ renamed (R_i(v̄′) ∧ challenges)."""
    original: Atom
    renamed: Atom
    challenges: tuple[Challenge, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "original": str(self.original),
            "renamed": str(self.renamed),
            "challenges": [c.to_dict() for c in self.challenges],
        }


Block = Union[Atom, RewrittenAtom]


@dataclass(frozen=True)
class RewrittenQuery:
    """The rewritten form of a ucajCQ."""
    query: ConjunctiveQuery
    blocks: tuple[Block, ...]
    hsc_mode: bool = False
    self_join_classes: tuple[tuple[Attribute, ...], ...] = ()

    @property
    def rewritten_atoms(self) -> list[RewrittenAtom]:
        return [b for b in self.blocks if isinstance(b, RewrittenAtom)]

    def to_text(self) -> str:
        """Render the rewritten formula."""
        head = ", ".join(str(v) for v in self.query.head)
        body = " ∧ ".join(_block_text(b) for b in self.blocks)
        bound = self.query.bound_variables
        if bound:
            body = f"∃{', '.join(bound)} ({body})"
        return f"{self.query.name}{PRIME}({head}) :- {body}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "query": str(self.query),
            "hsc_mode": self.hsc_mode,
            "blocks": [
                {"atom": str(b)} if isinstance(b, Atom) else b.to_dict()
                for b in self.blocks
            ],
            "self_join_classes": [[str(a) for a in cls] for cls in self.self_join_classes],
        }


def _count_text(anchor: Atom, anchor_attr: Attribute, term: CountTerm) -> str:
    local = ", ".join(str(t) for t in term.atom.terms)
    fixed = ", ".join(str(t) for t in anchor.terms)
    cond = f"TS(({fixed}), {anchor_attr}, ({local}), {term.attribute}) ∧ {term.atom}"
    if term.excluded is not None:
        cond += f" ∧ {term.value} ≠ {term.excluded}"
    return f"Count{{({local}) | {cond}}}"


def _block_text(block: Block) -> str:
    if isinstance(block, Atom):
        return str(block)
    parts = [str(block.renamed)]
    for ch in block.challenges:
        support = " + ".join(_count_text(block.renamed, ch.attribute, t) for t in ch.support)
        rivals = " + ".join(_count_text(block.renamed, ch.attribute, t) for t in ch.rivals)
        parts.append(f"∀{ch.challenger} [{support} > {rivals}]")
    renamed = ", ".join(ch.renamed for ch in block.challenges)
    return f"∃{renamed} ({' ∧ '.join(parts)})"


class _Names:
    """Fresh variable names that avoid a reserved set."""

    def __init__(self, reserved: set[str]):
        self.reserved = set(reserved)

    def fresh(self, base: str) -> str:
        name, n = base, 1
        while name in self.reserved:
            name = f"{base}{n}"
            n += 1
        self.reserved.add(name)
        return name


def _count_term(
    schema: Schema,
    q: ConjunctiveQuery,
    member: Attribute,
    value: str,
    excluded: Optional[str],
    reserved: set[str],
) -> CountTerm:
    rel = schema.relation(member.relation)
    template = next((a for a in q.atoms if a.relation == member.relation), None)
    local = _Names(reserved | {value})
    terms = []
    for i, attr in enumerate(rel.attributes):
        if attr.name == member.name:
            terms.append(Var(value))
            continue
        base = attr.name.lower()
        if template is not None and isinstance(template.terms[i], Var):
            base = template.terms[i].name
        terms.append(Var(local.fresh(base + PRIME)))
    return CountTerm(Atom(member.relation, tuple(terms)), member, value, excluded)


def rewrite(q: ConjunctiveQuery, mds: MDSet, schema: Optional[Schema] = None) -> RewrittenQuery:
    """
    Rewrite a ucajCQ so that plain evaluation yields its resolved answers.

    Atoms without a free variable on a changeable attribute pass through.
    Every other atom is renamed and challenged once per such position, with
    one Count term per attribute in the attribute-closure class.

    Raises:
        UnsupportedMDClassError: If mds is not NonInteracting, SimpleCycle or HSC.
        NotUcajError: If a bound repeated variable sits on a changeable attribute.
        RewriteError: For tail conditions, constants on changeable attributes,
            or a bound join between atoms that may resolve in different classes.
    """
    schema = schema or mds.schema
    if schema is None:
        raise RewriteError("no schema available")
    if mds.md_class not in SUPPORTED_CLASSES:
        raise UnsupportedMDClassError(str(mds.md_class), "rewrite")
    if q.conditions:
        raise RewriteError("equality conditions are answered by enumeration only")
    verdict = is_ucaj(q, mds, schema)
    if not verdict:
        raise NotUcajError(verdict.witness)
    joined = cross_class_join(q, mds, schema)
    if joined is not None:
        raise RewriteError(f"variable {joined} joins answer atoms that may resolve in different classes")

    changeable = mds.changeable_attributes
    free = set(q.free_variables)
    classes = attribute_closure(mds)
    names = _Names(set(q.variables))

    plan: list[tuple[Atom, list[tuple[int, Attribute, str, str, str]]]] = []
    for atom in q.atoms:
        rel = schema.relation(atom.relation)
        targets = []
        for i, (attr, term) in enumerate(zip(rel.attributes, atom.terms)):
            if attr not in changeable:
                continue
            if isinstance(term, Const):
                raise RewriteError(f"constant {term} on changeable attribute {attr}")
            if term.name in free:
                targets.append((i, attr, term.name, names.fresh(term.name + PRIME), names.fresh(term.name + DOUBLE_PRIME)))
        plan.append((atom, targets))

    blocks: list[Block] = []
    for atom, targets in plan:
        if not targets:
            blocks.append(atom)
            continue
        terms = list(atom.terms)
        for i, _, _, renamed, _ in targets:
            terms[i] = Var(renamed)
        challenges = []
        for _, attr, var, renamed, challenger in targets:
            members = classes.class_of(attr)
            support = tuple(_count_term(schema, q, m, var, None, names.reserved) for m in members)
            rivals = tuple(_count_term(schema, q, m, challenger, var, names.reserved) for m in members)
            challenges.append(Challenge(var, attr, renamed, challenger, support, rivals))
        blocks.append(RewrittenAtom(atom, Atom(atom.relation, tuple(terms)), tuple(challenges)))

    self_joins = tuple(
        cls for cls in classes.classes()
        if len({a.relation for a in cls}) < len(cls)
    )
    return RewrittenQuery(
        query=q,
        blocks=tuple(blocks),
        hsc_mode=mds.md_class is not MDClass.NON_INTERACTING,
        self_join_classes=self_joins,
    )


@dataclass
class EvalStats:
    """Operation counter for rewritten-query evaluation."""
    probes: int = 0


@dataclass
class _Evaluator:
    rq: RewrittenQuery
    d: Instance
    partition: TAPartition
    stats: EvalStats
    _counts: dict[tuple[int, Attribute], Counter] = field(default_factory=dict)

    def term_counts(self, cls: tuple[Position, ...], term: CountTerm) -> Counter:
        """Distinct identified tuples of the term's relation per value inside a class."""
        key = (id(cls), term.attribute)
        if key not in self._counts:
            counts: Counter = Counter()
            for p in cls:
                self.stats.probes += 1
                if p.relation == term.attribute.relation and p.attribute == term.attribute.name:
                    counts[self.d.value(p)] += 1
            self._counts[key] = counts
        return self._counts[key]

    def challenge(self, ch: Challenge, position: Position, binding: dict[str, Value]) -> Iterator[dict[str, Value]]:
        cls = self.partition.class_of(position)
        # Counts range over the whole class, summed across its relations
        support = Counter()
        for term in ch.support:
            support.update(self.term_counts(cls, term))
        rivals = Counter()
        for term in ch.rivals:
            rivals.update(self.term_counts(cls, term))

        # A variable bound by an earlier block is only checked
        if ch.variable in binding:
            candidates = [binding[ch.variable]]
        else:
            candidates = sorted(support)
        # Strict majority over every other value
        for v in candidates:
            best_rival = max((c for u, c in rivals.items() if u != v), default=0)
            if support[v] > best_rival:
                extended = dict(binding)
                extended[ch.variable] = v
                yield extended

    def block(self, block: Block, binding: dict[str, Value]) -> Iterator[dict[str, Value]]:
        if isinstance(block, Atom):
            for row in self.d.rows(block.relation).values():
                self.stats.probes += 1
                extended = match_atom(block, row, binding)
                if extended is not None:
                    yield extended
            return
        for tuple_id, row in self.d.rows(block.renamed.relation).items():
            self.stats.probes += 1
            extended = match_atom(block.renamed, row, binding)
            if extended is None:
                continue
            yield from self._challenges(block, tuple_id, 0, extended)

    def _challenges(self, block: RewrittenAtom, tuple_id: int, index: int, binding: dict[str, Value]) -> Iterator[dict[str, Value]]:
        if index == len(block.challenges):
            yield binding
            return
        ch = block.challenges[index]
        position = Position(block.renamed.relation, tuple_id, ch.attribute.name)
        for extended in self.challenge(ch, position, binding):
            yield from self._challenges(block, tuple_id, index + 1, extended)

    def solve(self, index: int, binding: dict[str, Value]) -> Iterator[dict[str, Value]]:
        if index == len(self.rq.blocks):
            yield binding
            return
        for extended in self.block(self.rq.blocks[index], binding):
            yield from self.solve(index + 1, extended)


def eval_rewritten(
    rq: RewrittenQuery,
    d: Instance,
    mds: MDSet,
    stats: Optional[EvalStats] = None,
) -> set[tuple[Value, ...]]:
    """
    Evaluate a rewritten query over d.

    TS is the tuple-attribute closure of d (HSC mode when the rewrite used
    it). Count counts distinct tuples, identified by tuple id.
    """
    stats = stats if stats is not None else EvalStats()
    partition = tuple_attribute_closure(d, mds, rq.hsc_mode)
    evaluator = _Evaluator(rq, d, partition, stats)
    answers = {
        tuple(binding[v.name] for v in rq.query.head)
        for binding in evaluator.solve(0, {})
    }
    logger.debug("rewritten evaluation: %d answer(s), %d probe(s)", len(answers), stats.probes)
    return answers
