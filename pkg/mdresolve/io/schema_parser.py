"""Parser for relation declarations: one ``Rel(attr:tag, ...)`` per line."""

from __future__ import annotations

import re
from pathlib import Path

from ..engine.instance import TEXT, VALUE_TAGS, Attribute, RelationSchema, Schema
from ..exceptions import SchemaParseError

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_RELATION_RE = re.compile(rf"^({_IDENT})\s*\((.*)\)$")
_ATTRIBUTE_RE = re.compile(rf"^({_IDENT})\s*(?::\s*(\w+))?$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_relation(line: str, line_no: int = 1) -> RelationSchema:
    """Parse one declaration; an omitted tag means text."""
    m = _RELATION_RE.match(line)
    if not m:
        raise SchemaParseError(line, line_no, "expected Rel(attr:tag, ...)")
    name, body = m.groups()
    if not body.strip():
        raise SchemaParseError(line, line_no, "relation without attributes")

    attributes: list[Attribute] = []
    for part in body.split(","):
        am = _ATTRIBUTE_RE.match(part.strip())
        if not am:
            raise SchemaParseError(line, line_no, f"bad attribute {part.strip()!r}")
        attr, tag = am.group(1), am.group(2) or TEXT
        if tag not in VALUE_TAGS:
            raise SchemaParseError(line, line_no, f"unknown tag {tag!r}")
        if any(a.name == attr for a in attributes):
            raise SchemaParseError(line, line_no, f"attribute {attr!r} declared twice")
        attributes.append(Attribute(name, attr, tag))
    return RelationSchema(name, tuple(attributes))


def parse_schema(text: str) -> Schema:
    """
    Parse a schema declaration.

    Args:
        text: Declarations, one per line; ``#`` starts a comment.

    Returns:
        Schema with relations in declaration order.

    Raises:
        SchemaParseError: On a malformed line or a repeated relation.
    """
    relations: list[RelationSchema] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        rel = parse_relation(line, line_no)
        if any(r.name == rel.name for r in relations):
            raise SchemaParseError(line, line_no, f"relation {rel.name!r} declared twice")
        relations.append(rel)
    return Schema(tuple(relations))


def load_schema(path: Path | str) -> Schema:
    """Parse a schema file."""
    return parse_schema(Path(path).read_text(encoding="utf-8"))
