"""Typed relational instances with stable tuple identifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Union

from ..exceptions import (
    DuplicateTupleIdError,
    InstanceMismatchError,
    UnknownAttributeError,
    UnknownRelationError,
    ValueTagError,
)

Value = Union[str, int]

TEXT = "text"
INTEGER = "integer"
VALUE_TAGS = (TEXT, INTEGER)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def value_tag(value: Any) -> str:
    """
    Return the tag of a scalar value.

    Raises:
        ValueTagError: If the value is neither text nor a 64-bit integer.
    """
    if isinstance(value, str):
        return TEXT
    if isinstance(value, int) and not isinstance(value, bool):
        if INT64_MIN <= value <= INT64_MAX:
            return INTEGER
        raise ValueTagError(INTEGER, value, "64-bit range")
    raise ValueTagError("text or integer", value)


def check_tag(value: Any, tag: str, where: str = "") -> Value:
    """Return value unchanged if it carries tag, else raise ValueTagError."""
    if value_tag(value) != tag:
        raise ValueTagError(tag, value, where)
    return value


@dataclass(frozen=True, order=True)
class Attribute:
    """An attribute R[A] together with its declared value tag."""
    relation: str
    name: str
    tag: str = TEXT

    def __str__(self) -> str:
        return f"{self.relation}[{self.name}]"


class TupleRef(NamedTuple):
    """Identifies a tuple by relation name and tuple id."""
    relation: str
    tuple_id: int

    def __str__(self) -> str:
        return f"{self.relation}#{self.tuple_id}"


class Position(NamedTuple):
    """A (tuple, attribute) cell of an instance."""
    relation: str
    tuple_id: int
    attribute: str

    @property
    def tuple_ref(self) -> TupleRef:
        return TupleRef(self.relation, self.tuple_id)

    def __str__(self) -> str:
        return f"{self.relation}#{self.tuple_id}[{self.attribute}]"


@dataclass(frozen=True)
class RelationSchema:
    """Declared attributes of one relation, in column order."""
    name: str
    attributes: tuple[Attribute, ...]

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    @property
    def arity(self) -> int:
        return len(self.attributes)

    def index(self, name: str) -> int:
        """Column index of an attribute name."""
        for i, attr in enumerate(self.attributes):
            if attr.name == name:
                return i
        raise UnknownAttributeError(self.name, name)

    def attribute(self, name: str) -> Attribute:
        return self.attributes[self.index(name)]

    def __str__(self) -> str:
        cols = ", ".join(f"{a.name}:{a.tag}" for a in self.attributes)
        return f"{self.name}({cols})"


@dataclass(frozen=True)
class Schema:
    """An ordered collection of relation schemas."""
    relations: tuple[RelationSchema, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for rel in self.relations:
            if rel.name in seen:
                raise InstanceMismatchError(f"relation '{rel.name}' declared twice")
            seen.add(rel.name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.relations)

    def relation(self, name: str) -> RelationSchema:
        for rel in self.relations:
            if rel.name == name:
                return rel
        raise UnknownRelationError(name, list(self.names))

    def attribute(self, relation: str, name: str) -> Attribute:
        return self.relation(relation).attribute(name)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.relations)


@dataclass(frozen=True)
class ChangeSet:
    """The set of positions whose values differ between two instances."""
    positions: frozenset[Position] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self) -> Iterator[Position]:
        return iter(sorted(self.positions))

    def __contains__(self, item: object) -> bool:
        return item in self.positions

    def __bool__(self) -> bool:
        return bool(self.positions)

    def to_list(self) -> list[list[Any]]:
        return [list(p) for p in self]


RowsInput = Mapping[str, Mapping[int, Sequence[Value]]]


class Instance:
    """
    An immutable relational instance.

    Each relation maps tuple ids to value vectors. Every update produces a
    new Instance; tuple ids never change.

    Examples:
        >>> schema = Schema((RelationSchema("R", (Attribute("R", "A"), Attribute("R", "B"))),))
        >>> d = Instance(schema, {"R": {0: ("a", "c"), 1: ("a", "c")}})
        >>> d.tuple_ids("R")
        (0, 1)
    """

    __slots__ = ("_schema", "_rows", "_key")

    def __init__(self, schema: Schema, rows: Optional[RowsInput] = None):
        rows = rows or {}
        for name in rows:
            schema.relation(name)

        checked: dict[str, dict[int, tuple[Value, ...]]] = {}
        for rel in schema.relations:
            table: dict[int, tuple[Value, ...]] = {}
            for tuple_id, values in (rows.get(rel.name) or {}).items():
                if not isinstance(tuple_id, int) or isinstance(tuple_id, bool) or tuple_id < 0:
                    raise InstanceMismatchError(
                        f"tuple id {tuple_id!r} of '{rel.name}' is not an unsigned integer"
                    )
                if tuple_id in table:
                    raise DuplicateTupleIdError(rel.name, tuple_id)
                values = tuple(values)
                if len(values) != rel.arity:
                    raise InstanceMismatchError(
                        f"tuple {tuple_id} of '{rel.name}' has {len(values)} values, "
                        f"expected {rel.arity}"
                    )
                for attr, value in zip(rel.attributes, values):
                    check_tag(value, attr.tag, f"{attr} of tuple {tuple_id}")
                table[tuple_id] = values
            checked[rel.name] = table
        self._init(schema, checked)

    def _init(self, schema: Schema, rows: dict[str, dict[int, tuple[Value, ...]]]) -> None:
        self._schema = schema
        self._rows = rows
        self._key: Optional[tuple] = None

    @classmethod
    def _trusted(cls, schema: Schema, rows: dict[str, dict[int, tuple[Value, ...]]]) -> Instance:
        inst = cls.__new__(cls)
        inst._init(schema, rows)
        return inst

    @classmethod
    def empty(cls, schema: Schema) -> Instance:
        return cls(schema)

    @property
    def schema(self) -> Schema:
        return self._schema

    def rows(self, relation: str) -> Mapping[int, tuple[Value, ...]]:
        """Read-only view of one relation's tuples keyed by id."""
        if relation not in self._rows:
            raise UnknownRelationError(relation, list(self._schema.names))
        return MappingProxyType(self._rows[relation])

    def tuple_ids(self, relation: str) -> tuple[int, ...]:
        return tuple(sorted(self.rows(relation)))

    def tuples(self, relation: str) -> Iterator[tuple[TupleRef, tuple[Value, ...]]]:
        """Yield (ref, values) pairs of one relation in id order."""
        table = self.rows(relation)
        for tuple_id in sorted(table):
            yield TupleRef(relation, tuple_id), table[tuple_id]

    def refs(self, relations: Optional[Iterable[str]] = None) -> list[TupleRef]:
        names = self._schema.names if relations is None else relations
        return [ref for name in names for ref, _ in self.tuples(name)]

    def row(self, ref: TupleRef) -> tuple[Value, ...]:
        try:
            return self.rows(ref.relation)[ref.tuple_id]
        except KeyError:
            raise InstanceMismatchError(f"no tuple {ref}") from None

    def value(self, position: Position) -> Value:
        rel = self._schema.relation(position.relation)
        return self.row(position.tuple_ref)[rel.index(position.attribute)]

    def positions(self, attributes: Iterable[Attribute]) -> list[Position]:
        """All positions of the given attributes, in canonical order."""
        out = [
            Position(attr.relation, tuple_id, attr.name)
            for attr in attributes
            for tuple_id in self.tuple_ids(attr.relation)
        ]
        return sorted(out)

    def active_domain(self, attributes: Iterable[Attribute]) -> set[Value]:
        domain: set[Value] = set()
        for attr in attributes:
            idx = self._schema.relation(attr.relation).index(attr.name)
            domain.update(values[idx] for values in self._rows[attr.relation].values())
        return domain

    def tuple_set(self, relation: str) -> frozenset[tuple[Value, ...]]:
        """The relation's tuples as a set, ids dropped."""
        return frozenset(self.rows(relation).values())

    def with_values(self, updates: Mapping[Position, Value]) -> Instance:
        """Return a copy with the given positions overwritten."""
        if not updates:
            return self
        by_tuple: dict[TupleRef, dict[int, Value]] = {}
        for pos, value in updates.items():
            rel = self._schema.relation(pos.relation)
            idx = rel.index(pos.attribute)
            check_tag(value, rel.attributes[idx].tag, str(pos))
            if pos.tuple_id not in self._rows[pos.relation]:
                raise InstanceMismatchError(f"no tuple {pos.tuple_ref}")
            by_tuple.setdefault(pos.tuple_ref, {})[idx] = value

        rows = dict(self._rows)
        for ref, changes in by_tuple.items():
            if rows[ref.relation] is self._rows[ref.relation]:
                rows[ref.relation] = dict(self._rows[ref.relation])
            values = list(rows[ref.relation][ref.tuple_id])
            for idx, value in changes.items():
                values[idx] = value
            rows[ref.relation][ref.tuple_id] = tuple(values)
        return Instance._trusted(self._schema, rows)

    def key(self) -> tuple:
        """Hashable value identity of the instance."""
        if self._key is None:
            self._key = tuple(
                (name, tuple(sorted(table.items())))
                for name, table in self._rows.items()
            )
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self._schema == other._schema and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __len__(self) -> int:
        return sum(len(t) for t in self._rows.values())

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form: attributes and rows (with `_id`) per relation."""
        out: dict[str, Any] = {}
        for rel in self._schema.relations:
            out[rel.name] = {
                "attributes": list(rel.attribute_names),
                "rows": [
                    {"_id": ref.tuple_id, **dict(zip(rel.attribute_names, values))}
                    for ref, values in self.tuples(rel.name)
                ],
            }
        return out

    def __repr__(self) -> str:
        sizes = ", ".join(f"{name}={len(t)}" for name, t in self._rows.items())
        return f"Instance({sizes})"


def diff(d1: Instance, d2: Instance) -> ChangeSet:
    """
    Positions whose values differ between two instances.

    Args:
        d1: First instance.
        d2: Second instance over the same schema and tuple ids.

    Returns:
        ChangeSet of differing positions.

    Raises:
        InstanceMismatchError: If schemas or tuple-id sets differ.
    """
    if d1.schema != d2.schema:
        raise InstanceMismatchError("schemas differ")
    changed: set[Position] = set()
    for rel in d1.schema.relations:
        left, right = d1.rows(rel.name), d2.rows(rel.name)
        if left.keys() != right.keys():
            raise InstanceMismatchError(f"tuple ids of '{rel.name}' differ")
        for tuple_id, values in left.items():
            other = right[tuple_id]
            if values == other:
                continue
            for attr, a, b in zip(rel.attributes, values, other):
                if a != b:
                    changed.add(Position(rel.name, tuple_id, attr.name))
    return ChangeSet(frozenset(changed))
