"""Reduction of resolved answering to consistent query answering under keys."""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from ..exceptions import EnumerationTruncatedError, OracleGuardError, ReductionShapeError
from .closure import most_frequent
from .instance import Instance, Schema, Value
from .mdspec import MatchingDependency, MDSet
from .query import ConjunctiveQuery
from .answers import answers_over
from .resolve import DEFAULT_DEPTH, DEFAULT_LIMIT, ORACLE_MAX_ATTRIBUTES, ORACLE_MAX_TUPLES, oracle_mris
from .similarity import EQUALITY

logger = logging.getLogger(__name__)

Answers = set[tuple[Value, ...]]


@dataclass(frozen=True)
class KeyConstraint:
    """Ā → B̄ on one relation, with Ā and B̄ partitioning its attributes."""
    relation: str
    key: tuple[str, ...]
    dependent: tuple[str, ...]

    def validate(self, schema: Schema) -> None:
        names = schema.relation(self.relation).attribute_names
        if set(self.key) & set(self.dependent):
            raise ReductionShapeError(f"key and dependent attributes of {self.relation} overlap")
        if set(self.key) | set(self.dependent) != set(names) or len(self.key) + len(self.dependent) != len(names):
            raise ReductionShapeError(f"key and dependent attributes must cover {self.relation} exactly")

    def groups(self, d: Instance) -> dict[tuple[Value, ...], list[tuple[int, tuple[Value, ...]]]]:
        """Tuples of the relation grouped by key value, groups in key order."""
        rel = d.schema.relation(self.relation)
        idx = [rel.index(a) for a in self.key]
        grouped: dict[tuple[Value, ...], list[tuple[int, tuple[Value, ...]]]] = {}
        for ref, row in d.tuples(self.relation):
            grouped.setdefault(tuple(row[i] for i in idx), []).append((ref.tuple_id, row))
        return dict(sorted(grouped.items()))


@dataclass
class RepairSet:
    """Subset-maximal key-satisfying sub-instances."""
    repairs: list[Instance] = field(default_factory=list)
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.repairs)

    def __iter__(self) -> Iterator[Instance]:
        return iter(self.repairs)


def key_constraint_of(md: MatchingDependency, schema: Schema) -> KeyConstraint:
    """
    The key constraint matching R[Ā] = R[Ā] → R[B̄] ⇌ R[B̄].

    Raises:
        ReductionShapeError: If md is not of that shape.
    """
    if md.left_relation != md.right_relation:
        raise ReductionShapeError("premise and target must stay within one relation")
    for p in md.lhs:
        if p.left != p.right:
            raise ReductionShapeError(f"premise pair {p} compares different attributes")
        if p.similarity.kind != EQUALITY:
            raise ReductionShapeError(f"premise pair {p} uses {p.similarity}, not equality")
    for p in md.rhs:
        if p.left != p.right:
            raise ReductionShapeError(f"target pair {p} matches different attributes")
    kc = KeyConstraint(
        md.left_relation,
        tuple(p.left.name for p in md.lhs),
        tuple(p.left.name for p in md.rhs),
    )
    kc.validate(schema)
    return kc


def reduce_instance(d: Instance, md: MatchingDependency) -> Instance:
    """
    Replace R by R′: per key group, the key crossed with each dependent
    attribute's set of most frequent values.
    """
    kc = key_constraint_of(md, d.schema)
    rel = d.schema.relation(kc.relation)
    dep_idx = [rel.index(a) for a in kc.dependent]
    key_idx = [rel.index(a) for a in kc.key]

    rows: dict[int, tuple[Value, ...]] = {}
    for key, members in kc.groups(d).items():
        choices = [most_frequent(Counter(row[i] for _, row in members)) for i in dep_idx]
        for combo in itertools.product(*choices):
            values: list[Value] = [None] * rel.arity  # type: ignore[list-item]
            for i, v in zip(key_idx, key):
                values[i] = v
            for i, v in zip(dep_idx, combo):
                values[i] = v
            rows[len(rows)] = tuple(values)

    all_rows = {name: dict(d.rows(name)) for name in d.schema.names}
    all_rows[kc.relation] = rows
    return Instance(d.schema, all_rows)


def enumerate_repairs(d: Instance, keys: list[KeyConstraint], limit: int = DEFAULT_LIMIT) -> RepairSet:
    """
    Every maximal key-satisfying subset of d.

    Per key group one dependent-value combination survives together with all
    tuples carrying it; choices are crossed over groups.
    """
    options: list[list[tuple[str, list[int]]]] = []
    for kc in keys:
        kc.validate(d.schema)
        rel = d.schema.relation(kc.relation)
        dep_idx = [rel.index(a) for a in kc.dependent]
        for members in kc.groups(d).values():
            by_combo: dict[tuple[Value, ...], list[int]] = {}
            for tuple_id, row in members:
                by_combo.setdefault(tuple(row[i] for i in dep_idx), []).append(tuple_id)
            options.append([(kc.relation, ids) for _, ids in sorted(by_combo.items())])

    keyed = {kc.relation for kc in keys}
    result = RepairSet()
    for combo in itertools.product(*options):
        if len(result.repairs) >= limit:
            result.truncated = True
            break
        rows = {name: dict(d.rows(name)) for name in d.schema.names if name not in keyed}
        for name in keyed:
            rows[name] = {}
        for relation, ids in combo:
            for tuple_id in ids:
                rows[relation][tuple_id] = d.rows(relation)[tuple_id]
        result.repairs.append(Instance(d.schema, rows))
    return result


def consistent_answers(q: ConjunctiveQuery, repairs: RepairSet) -> Answers:
    """Answers of q true in every repair."""
    return answers_over(q, repairs.repairs)


@dataclass
class ReductionReport:
    """Comparison of MRIs with repairs of the reduced instance."""
    mri_sets: set[frozenset]
    repair_sets: set[frozenset]
    resolved: Answers
    consistent: Answers

    @property
    def instances_agree(self) -> bool:
        return self.mri_sets == self.repair_sets

    @property
    def answers_agree(self) -> bool:
        return self.resolved == self.consistent

    @property
    def holds(self) -> bool:
        return self.instances_agree and self.answers_agree

    def to_dict(self) -> dict[str, Any]:
        return {
            "holds": self.holds,
            "mris": len(self.mri_sets),
            "repairs": len(self.repair_sets),
            "instances_agree": self.instances_agree,
            "answers_agree": self.answers_agree,
            "resolved": sorted(list(a) for a in self.resolved),
            "consistent": sorted(list(a) for a in self.consistent),
        }


def reduction_report(
    d: Instance,
    md: MatchingDependency,
    q: ConjunctiveQuery,
    *,
    limit: int = DEFAULT_LIMIT,
    depth: int = DEFAULT_DEPTH,
    max_tuples: int = ORACLE_MAX_TUPLES,
) -> ReductionReport:
    """
    Compute both sides of the reduction.

    MRIs come from exhaustive search over chase sequences and repairs from
    enumeration, so neither side relies on the closure construction.

    Raises:
        ReductionShapeError: If md is outside the reduction shape.
        OracleGuardError: If d is too large.
        EnumerationTruncatedError: If either side was cut short.
    """
    widest = max((rel.arity for rel in d.schema.relations), default=0)
    if len(d) > max_tuples or widest > ORACLE_MAX_ATTRIBUTES:
        raise OracleGuardError(len(d), widest, max_tuples, ORACLE_MAX_ATTRIBUTES)
    kc = key_constraint_of(md, d.schema)

    mris = oracle_mris(d, MDSet((md,), d.schema), depth, max_tuples=max_tuples)
    repairs = enumerate_repairs(reduce_instance(d, md), [kc], limit)
    if mris.truncated or repairs.truncated:
        raise EnumerationTruncatedError(limit)

    report = ReductionReport(
        mri_sets={m.tuple_set(kc.relation) for m in mris.mris},
        repair_sets={r.tuple_set(kc.relation) for r in repairs},
        resolved=answers_over(q, mris.mris),
        consistent=consistent_answers(q, repairs),
    )
    logger.info(
        "reduction check: %d MRI(s), %d repair(s), holds=%s",
        len(report.mri_sets), len(report.repair_sets), report.holds,
    )
    return report


def check_reduction(d: Instance, md: MatchingDependency, q: ConjunctiveQuery, *, limit: int = DEFAULT_LIMIT) -> bool:
    """True iff MRIs equal repairs of the reduced instance and both answer q alike."""
    return reduction_report(d, md, q, limit=limit).holds


def compose_with_reduction(
    consistent: Callable[[Instance], Answers], md: MatchingDependency
) -> Callable[[Instance], Answers]:
    """
    Turn a consistent-answer procedure for the key constraint of md into a
    resolved-answer procedure for md.
    """
    def resolved(d: Instance) -> Answers:
        return consistent(reduce_instance(d, md))

    return resolved
