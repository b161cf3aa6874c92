"""
Resolution semantics: modifiability, pair satisfaction, the chase,
minimally resolved instances and an exhaustive oracle.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from ..exceptions import ChaseLimitError, OracleGuardError, UnstableClosureError, UnsupportedMDClassError
from .closure import (
    EquivPartition,
    TAPartition,
    class_value_counts,
    closure_of_set,
    domain_groups,
    matched_positions,
    most_frequent,
    similar_pairs,
    tuple_attribute_closure,
    tuple_closure,
)
from .instance import ChangeSet, Instance, Position, TupleRef, Value, diff
from .mdspec import SUPPORTED_CLASSES, MDClass, MDSet
from .similarity import evaluate

logger = logging.getLogger(__name__)

UNEQUAL_MATCH = "unequal-match"
ILLEGAL_CHANGE = "illegal-change"
LOST_SIMILARITY = "lost-similarity"

DEFAULT_LIMIT = 4096
DEFAULT_MAX_STEPS = 10_000
DEFAULT_DEPTH = 4
ORACLE_MAX_TUPLES = 8
ORACLE_MAX_ATTRIBUTES = 4

# (component positions, their current values, level counts of the domain group) -> common value
ValuePolicy = Callable[[Sequence[Position], Sequence[Value], Counter], Value]


@dataclass(frozen=True)
class Violation:
    """One reason why a pair of instances fails an MD set."""
    md_index: Optional[int]
    left: TupleRef
    right: TupleRef
    pair: tuple[str, str]
    reason: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "md": self.md_index,
            "left": list(self.left),
            "right": list(self.right),
            "pair": list(self.pair),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class SatisfactionReport:
    """Outcome of checking (D, D') against an MD set."""
    violations: tuple[Violation, ...] = ()

    @property
    def verdict(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict[str, Any]:
        return {"verdict": self.verdict, "violations": [v.to_dict() for v in self.violations]}


@dataclass
class ResolutionResult:
    """
    A set of minimally resolved instances.

    ``resolved`` lists every resolved endpoint the oracle reached; it is empty
    for the closure-based computation.
    """
    mris: list[Instance]
    changes: list[ChangeSet]
    min_changes: int
    truncated: bool = False
    method: str = "closure"
    resolved: list[Instance] = field(default_factory=list)
    active_domain_relative: bool = False
    unstable_dropped: int = 0

    @property
    def count(self) -> int:
        return len(self.mris)

    def __len__(self) -> int:
        return len(self.mris)

    def keys(self) -> set[tuple]:
        return {m.key() for m in self.mris}


def enforcement_components(d: Instance, mds: MDSet) -> list[tuple[Position, ...]]:
    """Connected components of the enforcement graph on positions."""
    edges = [(p1, p2) for p1, p2, _, _ in matched_positions(d, mds)]
    universe = [p for edge in edges for p in edge]
    return list(EquivPartition(universe, edges).classes())


def _is_uniform(d: Instance, component: Sequence[Position]) -> bool:
    first = d.value(component[0])
    return all(d.value(p) == first for p in component[1:])


def modifiable_positions(d: Instance, mds: MDSet) -> frozenset[Position]:
    """
    Positions an MD may change in d.

    Least fixed point of: a matched pair differs at the position, or the
    position is matched by the same MD to a modifiable partner.
    """
    adjacency: dict[Position, set[Position]] = defaultdict(set)
    seeds: set[Position] = set()
    for p1, p2, _, _ in matched_positions(d, mds):
        adjacency[p1].add(p2)
        adjacency[p2].add(p1)
        if d.value(p1) != d.value(p2):
            seeds.update((p1, p2))

    reached = set(seeds)
    stack = list(seeds)
    while stack:
        for q in adjacency[stack.pop()]:
            if q not in reached:
                reached.add(q)
                stack.append(q)
    return frozenset(reached)


def check_pair(d: Instance, d2: Instance, mds: MDSet) -> SatisfactionReport:
    """
    Check (d, d2) against every MD.

    Condition 1: tuples matched in d agree in d2 on the matched attributes.
    Condition 2: positions not modifiable in d keep their value in d2.

    Raises:
        InstanceMismatchError: If d and d2 differ in schema or tuple ids.
    """
    changed = diff(d, d2)
    violations: set[Violation] = set()
    for p1, p2, index, _ in matched_positions(d, mds):
        if d2.value(p1) != d2.value(p2):
            a, b = sorted((p1, p2))
            violations.add(Violation(index, a.tuple_ref, b.tuple_ref, (a.attribute, b.attribute), UNEQUAL_MATCH))

    if changed:
        allowed = modifiable_positions(d, mds)
        for p in changed:
            if p not in allowed:
                violations.add(Violation(None, p.tuple_ref, p.tuple_ref, (p.attribute, p.attribute), ILLEGAL_CHANGE))
    return SatisfactionReport(tuple(sorted(violations, key=_violation_order)))


def _violation_order(v: Violation) -> tuple:
    return (v.reason, -1 if v.md_index is None else v.md_index, v.left, v.right, v.pair)


def is_stable(d: Instance, mds: MDSet) -> bool:
    """True iff (d, d) satisfies mds, i.e. every matched pair already agrees."""
    return all(d.value(p1) == d.value(p2) for p1, p2, _, _ in matched_positions(d, mds))


def check_fan_pair(d: Instance, d2: Instance, mds: MDSet) -> SatisfactionReport:
    """
    Diagnostic for the similarity-preserving pair semantics.

    Tuples similar in d must agree on every target in d2 and stay similar
    on every premise pair in d2. Nothing is enforced.
    """
    diff(d, d2)
    violations: set[Violation] = set()
    for index, md in enumerate(mds):
        left = d.schema.relation(md.left_relation)
        right = d.schema.relation(md.right_relation)
        for r1, r2 in similar_pairs(d, md):
            t1, t2 = d2.row(r1), d2.row(r2)
            for pair in md.rhs:
                if t1[left.index(pair.left.name)] != t2[right.index(pair.right.name)]:
                    violations.add(Violation(index, r1, r2, (pair.left.name, pair.right.name), UNEQUAL_MATCH))
            for pair in md.lhs:
                x, y = t1[left.index(pair.left.name)], t2[right.index(pair.right.name)]
                if not evaluate(pair.similarity, x, y):
                    violations.add(Violation(index, r1, r2, (pair.left.name, pair.right.name), LOST_SIMILARITY))
    return SatisfactionReport(tuple(sorted(violations, key=_violation_order)))


def _level_counts(d: Instance, mds: MDSet) -> tuple[dict[tuple[str, str], int], dict[int, Counter]]:
    groups = domain_groups(mds)
    counts: dict[int, Counter] = defaultdict(Counter)
    for p in d.positions(mds.changeable_attributes):
        counts[groups[(p.relation, p.attribute)]][d.value(p)] += 1
    return groups, counts


def level_sum(d: Instance, mds: MDSet) -> int:
    """Sum over changeable positions of how often their value occurs in the same value domain."""
    _, counts = _level_counts(d, mds)
    return sum(c * c for counter in counts.values() for c in counter.values())


def highest_level(positions: Sequence[Position], values: Sequence[Value], levels: Counter) -> Value:
    """The most frequent value of the domain among the component's values; ties go to the largest."""
    return max(set(values), key=lambda v: (levels[v], v))


def chase_step(d: Instance, mds: MDSet, policy: Optional[ValuePolicy] = None) -> Instance:
    """
    Apply every MD once.

    Each non-uniform component of the enforcement graph gets one common value
    chosen by ``policy``; uniform components are left alone.
    """
    policy = policy or highest_level
    components = [c for c in enforcement_components(d, mds) if not _is_uniform(d, c)]
    if not components:
        return d

    groups, counts = _level_counts(d, mds)
    updates: dict[Position, Value] = {}
    for component in components:
        levels = counts[groups[(component[0].relation, component[0].attribute)]]
        values = [d.value(p) for p in component]
        common = policy(component, values, levels)
        for p, old in zip(component, values):
            if old != common:
                levels[old] -= 1
                levels[common] += 1
                updates[p] = common
    return d.with_values(updates)


def chase(
    d: Instance,
    mds: MDSet,
    max_steps: int = DEFAULT_MAX_STEPS,
    policy: Optional[ValuePolicy] = None,
) -> list[Instance]:
    """
    Run chase steps until the instance is stable.

    Returns:
        The sequence of instances, starting with d and ending stable.

    Raises:
        ChaseLimitError: If more than max_steps steps would be needed.
    """
    states = [d]
    while not is_stable(states[-1], mds):
        if len(states) > max_steps:
            raise ChaseLimitError(max_steps)
        nxt = chase_step(states[-1], mds, policy)
        logger.debug(
            "chase step %d: %d position(s) changed, level-sum %d",
            len(states), len(diff(states[-1], nxt)), level_sum(nxt, mds),
        )
        states.append(nxt)
    return states


def resolve(
    d: Instance,
    mds: MDSet,
    max_steps: int = DEFAULT_MAX_STEPS,
    policy: Optional[ValuePolicy] = None,
) -> Instance:
    """A resolved instance of d (not necessarily minimal)."""
    return chase(d, mds, max_steps, policy)[-1]


def simple_cycle_partition(d: Instance, mds: MDSet) -> TAPartition:
    """
    Positions grouped by the closure of all tuple closures.

    For every class E of that closure and every corresponding pair (A, B) of
    the cycle, the A-positions of E's left tuples and the B-positions of its
    right tuples form one group.
    """
    tuples = closure_of_set(tuple_closure(d, md) for md in mds)
    pairs = list(dict.fromkeys(
        (p.left, p.right) for md in mds for p in (*md.lhs, *md.rhs)
    ))
    links: list[tuple[Position, Position]] = []
    for cls in tuples:
        for a, b in pairs:
            members = [Position(t.relation, t.tuple_id, a.name) for t in cls if t.relation == a.relation]
            members += [Position(t.relation, t.tuple_id, b.name) for t in cls if t.relation == b.relation]
            links.extend((members[0], m) for m in members[1:])
    return EquivPartition(d.positions(mds.changeable_attributes), links)


def mri_partition(d: Instance, mds: MDSet, use_tuple_attribute_closure: bool = False) -> tuple[TAPartition, str]:
    """The closure whose classes an MRI sets to a most frequent value."""
    md_class = mds.md_class
    if md_class not in SUPPORTED_CLASSES:
        raise UnsupportedMDClassError(str(md_class), "MRI computation")
    if md_class is MDClass.SIMPLE_CYCLE and not use_tuple_attribute_closure:
        return simple_cycle_partition(d, mds), "tuple-closure"
    hsc_mode = md_class is not MDClass.NON_INTERACTING
    return tuple_attribute_closure(d, mds, hsc_mode), "tuple-attribute-closure"


def compute_mris(
    d: Instance,
    mds: MDSet,
    limit: int = DEFAULT_LIMIT,
    *,
    use_tuple_attribute_closure: bool = False,
    depth: int = DEFAULT_DEPTH,
) -> ResolutionResult:
    """
    All minimally resolved instances of a NonInteracting, SimpleCycle or HSC set.

    Every class of the closure is set to one of its most frequent values;
    each combination of tied choices is one MRI. A chosen value can make
    tuples of different classes similar; when any candidate comes out
    unstable the closure is not trusted and the MRIs come from the oracle.

    Args:
        d: The instance.
        mds: The MD set.
        limit: Maximum number of MRIs to emit.
        use_tuple_attribute_closure: For simple cycles, use the
            tuple-attribute closure instead of the tuple closure.
        depth: Oracle depth when unstable candidates force the fallback.

    Raises:
        UnsupportedMDClassError: For DAG or GeneralInteracting sets.
        UnstableClosureError: If candidates are unstable and d is too large for the oracle.
    """
    partition, method = mri_partition(d, mds, use_tuple_attribute_closure)

    min_changes = 0
    choices: list[tuple[tuple[Position, ...], list[Value]]] = []
    for cls in partition:
        counts = class_value_counts(d, cls)
        winners = most_frequent(counts)
        min_changes += len(cls) - counts[winners[0]]
        if len(winners) > 1 or len(counts) > 1:
            choices.append((cls, winners))

    mris: list[Instance] = []
    changes: list[ChangeSet] = []
    seen: set[tuple] = set()
    truncated = False
    dropped = 0
    for combo in itertools.product(*(winners for _, winners in choices)):
        if len(mris) >= limit:
            truncated = True
            break
        updates = {
            p: v
            for (cls, _), v in zip(choices, combo)
            for p in cls
            if d.value(p) != v
        }
        candidate = d.with_values(updates)
        if candidate.key() in seen:
            continue
        seen.add(candidate.key())
        if not is_stable(candidate, mds):
            dropped += 1
            logger.debug("unstable candidate with %d change(s)", len(updates))
            continue
        mris.append(candidate)
        changes.append(diff(d, candidate))

    # Some candidate made tuples of different classes similar
    if dropped:
        logger.warning("%d %s candidate(s) unstable; falling back to the oracle", dropped, method)
        try:
            result = oracle_mris(d, mds, depth)
        except OracleGuardError as e:
            raise UnstableClosureError(dropped, method) from e
        result.unstable_dropped = dropped
        return result

    logger.info(
        "%d MRI(s) via %s, %d change(s) each%s",
        len(mris), method, min_changes, " (truncated)" if truncated else "",
    )
    return ResolutionResult(
        mris=mris,
        changes=changes,
        min_changes=min_changes,
        truncated=truncated,
        method=method,
        unstable_dropped=dropped,
    )


def verify_mri(d: Instance, candidate: Instance, mds: MDSet) -> bool:
    """
    Check, without enumerating, that candidate is an MRI of d.

    The candidate must be stable, change only closure positions, and set each
    closure class to one of its most frequent values in d.
    """
    partition, _ = mri_partition(d, mds)
    if not is_stable(candidate, mds):
        return False
    if any(p not in partition for p in diff(d, candidate)):
        return False
    for cls in partition:
        values = {candidate.value(p) for p in cls}
        if len(values) != 1 or values.pop() not in most_frequent(class_value_counts(d, cls)):
            return False
    return True


def oracle_mris(
    d: Instance,
    mds: MDSet,
    depth: int = DEFAULT_DEPTH,
    *,
    max_tuples: int = ORACLE_MAX_TUPLES,
    max_attributes: int = ORACLE_MAX_ATTRIBUTES,
) -> ResolutionResult:
    """
    MRIs by exhaustive search over chase sequences of length at most depth.

    Each step gives every non-uniform enforcement component any common value
    from the active domain of its attribute-closure class.

    Raises:
        OracleGuardError: If d has too many tuples or too wide a relation.
    """
    widest = max((rel.arity for rel in d.schema.relations), default=0)
    if len(d) > max_tuples or widest > max_attributes:
        raise OracleGuardError(len(d), widest, max_tuples, max_attributes)

    # Candidate values come from the active domain of each attribute-closure group
    groups = domain_groups(mds)
    domain_sets: dict[int, set[Value]] = defaultdict(set)
    for (relation, name), gid in groups.items():
        domain_sets[gid] |= d.active_domain([d.schema.attribute(relation, name)])
    domains = {gid: sorted(values) for gid, values in domain_sets.items()}

    # Breadth-first over chase steps; stable states end a sequence
    seen = {d.key()}
    frontier = [d]
    resolved: dict[tuple, Instance] = {}
    truncated = False
    for level in range(depth + 1):
        successors: list[Instance] = []
        for state in frontier:
            if is_stable(state, mds):
                resolved[state.key()] = state
                continue
            if level == depth:
                truncated = True
                continue
            components = [c for c in enforcement_components(state, mds) if not _is_uniform(state, c)]
            options = [domains[groups[(c[0].relation, c[0].attribute)]] for c in components]
            for combo in itertools.product(*options):
                nxt = state.with_values({p: v for c, v in zip(components, combo) for p in c})
                if nxt.key() not in seen:
                    seen.add(nxt.key())
                    successors.append(nxt)
        logger.debug("oracle depth %d: %d new state(s)", level + 1, len(successors))
        frontier = successors
        if not frontier:
            break

    # Keep the endpoints with the fewest changes
    endpoints = sorted(resolved.values(), key=Instance.key)
    sizes = {e.key(): len(diff(d, e)) for e in endpoints}
    best = min(sizes.values(), default=0)
    mris = [e for e in endpoints if sizes[e.key()] == best]

    relative = mds.md_class not in SUPPORTED_CLASSES
    if relative:
        warnings.warn(
            f"oracle result for a {mds.md_class} MD set is relative to the active domain",
            stacklevel=2,
        )
    return ResolutionResult(
        mris=mris,
        changes=[diff(d, m) for m in mris],
        min_changes=best,
        truncated=truncated,
        method="oracle",
        resolved=endpoints,
        active_domain_relative=relative,
    )
