"""Custom exceptions for mdresolve."""

from __future__ import annotations

from typing import Any, Optional


def _preview(items: list[str], limit: int = 3) -> str:
    """Render the first few items of a list, noting how many were left out."""
    lines = "\n".join(f"  - {item}" for item in items[:limit])
    if len(items) > limit:
        lines += f"\n  ... and {len(items) - limit} more"
    return lines


class MDResolveError(Exception):
    """Base exception for all mdresolve errors."""
    pass


class SchemaParseError(MDResolveError):
    """Raised when a schema declaration cannot be parsed."""

    def __init__(self, source: str, line_no: int, detail: str = ""):
        self.source = source
        self.line_no = line_no
        self.detail = detail
        msg = f"Failed to parse schema declaration at line {line_no}: {source!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnknownRelationError(MDResolveError):
    """Raised when a relation is not declared in the schema."""

    def __init__(self, relation: str, available: Optional[list[str]] = None):
        self.relation = relation
        self.available = available or []
        msg = f"Relation '{relation}' not found."
        if self.available:
            msg += f" Declared relations: {', '.join(self.available)}"
        super().__init__(msg)


class UnknownAttributeError(MDResolveError):
    """Raised when an attribute is not declared for its relation."""

    def __init__(self, relation: str, attribute: str):
        self.relation = relation
        self.attribute = attribute
        super().__init__(f"Attribute '{attribute}' not declared for relation '{relation}'")


class CSVFormatError(MDResolveError):
    """Raised when a CSV source does not match its declared relation."""

    def __init__(self, relation: str, row_no: int, detail: str):
        self.relation = relation
        self.row_no = row_no
        self.detail = detail
        super().__init__(f"Malformed CSV for relation '{relation}' at row {row_no}: {detail}")


class ValueTagError(MDResolveError, TypeError):
    """Raised when a value does not carry the expected tag."""

    def __init__(self, expected: str, value: Any, where: str = ""):
        self.expected = expected
        self.value = value
        self.where = where
        msg = f"Expected a {expected} value, got {value!r}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class DuplicateTupleIdError(MDResolveError):
    """Raised when two tuples of one relation share an identifier."""

    def __init__(self, relation: str, tuple_id: int):
        self.relation = relation
        self.tuple_id = tuple_id
        super().__init__(f"Duplicate tuple id {tuple_id} in relation '{relation}'")


class InstanceMismatchError(MDResolveError):
    """Raised when two instances are not comparable position by position."""

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"Instances are not comparable: {detail}")


class MDParseError(MDResolveError):
    """Raised when a matching dependency cannot be parsed or validated."""

    def __init__(self, line_no: int, text: str, detail: str = ""):
        self.line_no = line_no
        self.text = text
        self.detail = detail
        msg = f"Invalid matching dependency at line {line_no}: {text!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnsupportedMDClassError(MDResolveError):
    """Raised when an operation is not defined for an MD class."""

    def __init__(self, md_class: str, operation: str):
        self.md_class = md_class
        self.operation = operation
        super().__init__(
            f"{operation} does not support {md_class} MD sets; "
            f"supported: NonInteracting, SimpleCycle, HSC"
        )


class ChaseLimitError(MDResolveError):
    """Raised when the chase does not reach a stable instance in time."""

    def __init__(self, max_steps: int):
        self.max_steps = max_steps
        super().__init__(f"Chase did not stabilize within {max_steps} steps")


class OracleGuardError(MDResolveError):
    """Raised when an instance is too large for exhaustive search."""

    def __init__(self, tuples: int, attributes: int, max_tuples: int, max_attributes: int):
        self.tuples = tuples
        self.attributes = attributes
        super().__init__(
            f"Instance too large for the oracle: {tuples} tuples, {attributes} attributes "
            f"(limits: {max_tuples} tuples, {max_attributes} attributes per relation)"
        )


class UnstableClosureError(MDResolveError):
    """Raised when closure candidates are unstable and exhaustive search is out of reach."""

    def __init__(self, dropped: int, method: str):
        self.dropped = dropped
        self.method = method
        super().__init__(
            f"{dropped} {method} candidate(s) are not stable and the instance is too large for the oracle"
        )


class QueryParseError(MDResolveError):
    """Raised when a conjunctive query cannot be parsed or validated."""

    def __init__(self, source: str, detail: str = ""):
        self.source = source
        self.detail = detail
        msg = f"Failed to parse query: {source!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NotUcajError(MDResolveError):
    """Raised when a query has a bound repeated variable on a changeable attribute."""

    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(
            f"Query is not a ucajCQ: bound variable '{variable}' is repeated "
            f"on a changeable attribute"
        )


class RewriteError(MDResolveError):
    """Raised when a query falls outside the rewritable fragment."""

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"Query cannot be rewritten: {detail}")


class NoStrategyError(MDResolveError):
    """Raised when no answering strategy applies to a query."""

    def __init__(self, reasons: list[str]):
        self.reasons = reasons
        msg = f"No legal strategy for resolved answers ({len(reasons)} reason(s)):\n"
        msg += _preview(reasons)
        super().__init__(msg)


class EnumerationTruncatedError(MDResolveError):
    """Raised when an answer would need a complete enumeration that was cut short."""

    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"Enumeration truncated at {limit} instances; raise the limit")


class ReductionShapeError(MDResolveError):
    """Raised when a dependency is outside the key-constraint reduction shape."""

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"Dependency not in reduction shape: {detail}")


class ConfigError(MDResolveError):
    """Raised when a run configuration is invalid."""

    def __init__(self, field: str, detail: str):
        self.field = field
        self.detail = detail
        super().__init__(f"Invalid configuration for '{field}': {detail}")


class FixtureNotFoundError(MDResolveError):
    """Raised when a bundled fixture is requested that does not exist."""

    def __init__(self, name: str, available: Optional[list[str]] = None):
        self.name = name
        self.available = available or []
        msg = f"Fixture '{name}' not found."
        if self.available:
            msg += f" Available fixtures: {', '.join(self.available)}"
        super().__init__(msg)
