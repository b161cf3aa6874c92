"""Conjunctive queries: AST, in-memory evaluation and the ucajCQ test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from ..exceptions import QueryParseError
from .closure import UnionFind
from .instance import Attribute, Instance, Schema, Value, value_tag
from .mdspec import MDSet


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Value

    def __str__(self) -> str:
        if isinstance(self.value, str):
            return "'" + self.value.replace("'", "\\'") + "'"
        return str(self.value)


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    """R(t1, ..., tn)."""
    relation: str
    terms: tuple[Term, ...]

    def variables(self) -> list[str]:
        return [t.name for t in self.terms if isinstance(t, Var)]

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Equality:
    """var = const, or var = var."""
    variable: Var
    term: Term

    def holds(self, binding: Mapping[str, Value]) -> bool:
        left = binding[self.variable.name]
        right = binding[self.term.name] if isinstance(self.term, Var) else self.term.value
        return left == right

    def __str__(self) -> str:
        return f"{self.variable} = {self.term}"


@dataclass(frozen=True)
class ConjunctiveQuery:
    """
    Q(x̄) :- R1(v̄1), ..., Rn(v̄n) [, tail].

    ``conditions`` is a conjunction of disjunctions of equalities; it is
    empty for pure conjunctive queries.
    """
    name: str
    head: tuple[Var, ...]
    atoms: tuple[Atom, ...]
    conditions: tuple[tuple[Equality, ...], ...] = ()

    @property
    def free_variables(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(v.name for v in self.head))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(v for atom in self.atoms for v in atom.variables()))

    @property
    def bound_variables(self) -> tuple[str, ...]:
        free = set(self.free_variables)
        return tuple(v for v in self.variables if v not in free)

    @property
    def is_boolean(self) -> bool:
        return not self.head

    def occurrences(self, schema: Schema) -> dict[str, list[Attribute]]:
        """Attributes at which each variable occurs, one entry per occurrence."""
        found: dict[str, list[Attribute]] = {}
        for atom in self.atoms:
            rel = schema.relation(atom.relation)
            for attr, term in zip(rel.attributes, atom.terms):
                if isinstance(term, Var):
                    found.setdefault(term.name, []).append(attr)
        return found

    def validate(self, schema: Schema) -> None:
        """
        Check relations, arities, variable safety and tag consistency.

        Raises:
            UnknownRelationError: If an atom names an undeclared relation.
            QueryParseError: On any other violation.
        """
        src = str(self)
        for atom in self.atoms:
            rel = schema.relation(atom.relation)
            if len(atom.terms) != rel.arity:
                raise QueryParseError(src, f"{atom.relation} has arity {rel.arity}, got {len(atom.terms)}")
            for attr, term in zip(rel.attributes, atom.terms):
                if isinstance(term, Const) and value_tag(term.value) != attr.tag:
                    raise QueryParseError(src, f"constant {term} does not fit {attr}:{attr.tag}")

        occurrences = self.occurrences(schema)
        tags: dict[str, str] = {}
        for var, attrs in occurrences.items():
            kinds = {a.tag for a in attrs}
            if len(kinds) > 1:
                raise QueryParseError(src, f"variable '{var}' used with tags {sorted(kinds)}")
            tags[var] = kinds.pop()

        for var in self.head:
            if var.name not in occurrences:
                raise QueryParseError(src, f"head variable '{var}' does not occur in any atom")
        for disjunction in self.conditions:
            for eq in disjunction:
                for term in (eq.variable, eq.term):
                    if isinstance(term, Var) and term.name not in occurrences:
                        raise QueryParseError(src, f"condition variable '{term}' does not occur in any atom")
                if isinstance(eq.term, Const) and value_tag(eq.term.value) != tags[eq.variable.name]:
                    raise QueryParseError(src, f"condition {eq} compares across tags")

    def __str__(self) -> str:
        head = ", ".join(str(v) for v in self.head)
        body = [str(a) for a in self.atoms]
        body += [" or ".join(str(eq) for eq in disjunction) for disjunction in self.conditions]
        return f"{self.name}({head}) :- {', '.join(body)}"


def match_atom(
    atom: Atom, row: tuple[Value, ...], binding: Mapping[str, Value]
) -> Optional[dict[str, Value]]:
    """Extend binding so that atom matches row, or None."""
    extended = dict(binding)
    for term, value in zip(atom.terms, row):
        if isinstance(term, Const):
            if term.value != value:
                return None
        elif term.name in extended:
            if extended[term.name] != value:
                return None
        else:
            extended[term.name] = value
    return extended


def _bindings(
    q: ConjunctiveQuery, d: Instance, index: int, binding: dict[str, Value]
) -> Iterator[dict[str, Value]]:
    if index == len(q.atoms):
        yield binding
        return
    atom = q.atoms[index]
    for row in d.rows(atom.relation).values():
        extended = match_atom(atom, row, binding)
        if extended is not None:
            yield from _bindings(q, d, index + 1, extended)


def evaluate_query(q: ConjunctiveQuery, d: Instance) -> set[tuple[Value, ...]]:
    """Answers of q over d, tail conditions included."""
    answers: set[tuple[Value, ...]] = set()
    for binding in _bindings(q, d, 0, {}):
        if all(any(eq.holds(binding) for eq in disjunction) for disjunction in q.conditions):
            answers.add(tuple(binding[v.name] for v in q.head))
    return answers


@dataclass(frozen=True)
class UcajVerdict:
    """Whether a query is a ucajCQ; ``witness`` names an offending variable."""
    ok: bool
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def is_ucaj(q: ConjunctiveQuery, mds: MDSet, schema: Optional[Schema] = None) -> UcajVerdict:
    """
    No bound variable that occurs more than once sits on a changeable attribute.

    Examples:
        Q(x,z) :- R(x,y), R(z,y) with R[A]≈R[A] → R[B]⇌R[B] fails with witness y.
    """
    schema = schema or mds.schema
    if schema is None:
        raise ValueError("a schema is required to locate variable occurrences")
    changeable = mds.changeable_attributes
    occurrences = q.occurrences(schema)
    for var in sorted(q.bound_variables):
        attrs = occurrences.get(var, [])
        if len(attrs) >= 2 and any(a in changeable for a in attrs):
            return UcajVerdict(False, var)
    return UcajVerdict(True)


def cross_class_join(q: ConjunctiveQuery, mds: MDSet, schema: Optional[Schema] = None) -> Optional[str]:
    """
    A bound variable that joins two answer-carrying atoms across classes, or None.

    An atom carries answers when a free variable sits on one of its
    changeable attributes. Two such atoms linked by a chain of bound
    variables may draw their witnesses from different tuple-attribute
    classes, one per tie-break, and a per-class count cannot see that.
    The only link kept is a join on ``R[A]`` when every MD reads
    ``R[A]≈R[A]`` alone: equal premise values put the joined tuples in
    one class.

    Examples:
        Q(y,w) :- R(x,y,z), R(x2,w,z) with R[A]≈R[A] → R[B]⇌R[B] returns z.
    """
    schema = schema or mds.schema
    if schema is None:
        raise ValueError("a schema is required to locate variable occurrences")
    changeable = mds.changeable_attributes
    free = set(q.free_variables)
    carriers: set[int] = set()
    links: dict[str, list[tuple[int, Attribute]]] = {}
    for i, atom in enumerate(q.atoms):
        rel = schema.relation(atom.relation)
        for attr, term in zip(rel.attributes, atom.terms):
            if not isinstance(term, Var):
                continue
            if term.name in free:
                if attr in changeable:
                    carriers.add(i)
            else:
                links.setdefault(term.name, []).append((i, attr))
    if len(carriers) < 2:
        return None

    premises = {(p.left, p.right) for md in mds for p in md.lhs}
    shared = None
    if len(premises) == 1 and all(len(md.lhs) == 1 for md in mds):
        left, right = premises.pop()
        shared = left if left == right else None

    groups = UnionFind(range(len(q.atoms)))
    for var in sorted(links):
        occurrences = links[var]
        atoms = sorted({i for i, _ in occurrences})
        if len(atoms) < 2 or all(attr == shared for _, attr in occurrences):
            continue
        for i in atoms[1:]:
            groups.union(atoms[0], i)
        root = groups.find(atoms[0])
        if sum(1 for i in carriers if groups.find(i) == root) >= 2:
            return var
    return None
