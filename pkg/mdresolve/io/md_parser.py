"""
Parser for the matching-dependency DSL.

One MD per line::

    R[A]~S[B], R[F]~S[G] -> R[C]<=>S[E], R[K]<=>S[L] sim eq, edit(1)

The ``sim`` list is positional over the premise pairs. Missing entries fall
back to a pair-wide default declared earlier with::

    similarity R[A]~S[B] = pairs{a1~c1, a2~a3}

and then to equality. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional

from ..engine.instance import INTEGER, Attribute, Schema, Value
from ..engine.mdspec import LhsPair, MatchingDependency, MDSet, RhsPair
from ..engine.similarity import SimilarityRegistry, SimilaritySpec
from ..exceptions import MDParseError, MDResolveError

_ATTR = r"(\w+)\s*\[\s*(\w+)\s*\]"
_LHS_RE = re.compile(rf"^{_ATTR}\s*(?:~|≈)\s*{_ATTR}$")
_RHS_RE = re.compile(rf"^{_ATTR}\s*(?:<=>|⇌)\s*{_ATTR}$")
_MD_RE = re.compile(r"^(?P<lhs>.+?)\s*(?:->|→)\s*(?P<rhs>.+?)(?:\s+sim\s+(?P<sim>.*))?$")
_REGISTRY_RE = re.compile(r"^similarity\s+(?P<pair>.+?)\s*=\s*(?P<spec>.+)$")
_SPEC_RE = re.compile(r"eq|edit\(\s*\d+\s*\)|pairs\{[^}]*\}")


class _Line:
    """Error context for one source line."""

    def __init__(self, line_no: int, text: str):
        self.line_no = line_no
        self.text = text

    def error(self, detail: str) -> MDParseError:
        return MDParseError(self.line_no, self.text, detail)


def _split_pairs(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _attribute(schema: Schema, relation: str, name: str, ctx: _Line) -> Attribute:
    try:
        return schema.attribute(relation, name)
    except MDResolveError as e:
        raise ctx.error(str(e)) from e


def _attribute_pair(schema: Schema, pattern: re.Pattern, text: str, ctx: _Line) -> tuple[Attribute, Attribute]:
    m = pattern.match(text)
    if not m:
        raise ctx.error(f"cannot read pair {text!r}")
    r, a, s, b = m.groups()
    left, right = _attribute(schema, r, a, ctx), _attribute(schema, s, b, ctx)
    if left.tag != right.tag:
        raise ctx.error(f"{left} is {left.tag} but {right} is {right.tag}")
    return left, right


def _pair_value(raw: str, tag: str, ctx: _Line) -> Value:
    raw = raw.strip().strip("'\"")
    if tag == INTEGER:
        try:
            return int(raw)
        except ValueError:
            raise ctx.error(f"similar value {raw!r} is not an integer") from None
    return raw


def parse_similarity(text: str, tag: str, ctx: Optional[_Line] = None) -> SimilaritySpec:
    """Parse ``eq``, ``edit(k)`` or ``pairs{x~y, ...}`` for values of one tag."""
    ctx = ctx or _Line(0, text)
    text = text.strip()
    if text == "eq":
        return SimilaritySpec.equality(tag)
    m = re.fullmatch(r"edit\(\s*(\d+)\s*\)", text)
    if m:
        if tag == INTEGER:
            raise ctx.error("edit distance applies to text attributes only")
        return SimilaritySpec.edit_distance(int(m.group(1)))
    m = re.fullmatch(r"pairs\{([^}]*)\}", text)
    if m:
        pairs = []
        for item in _split_pairs(m.group(1)):
            if "~" not in item:
                raise ctx.error(f"similar pair {item!r} needs the form x~y")
            x, y = item.split("~", 1)
            pairs.append((_pair_value(x, tag, ctx), _pair_value(y, tag, ctx)))
        return SimilaritySpec.explicit_pairs(pairs, tag)
    raise ctx.error(f"unknown similarity {text!r}")


def _similarity_list(text: str, ctx: _Line) -> list[str]:
    specs = _SPEC_RE.findall(text)
    leftover = _SPEC_RE.sub("", text).replace(",", "").strip()
    if leftover:
        raise ctx.error(f"cannot read similarity list near {leftover!r}")
    return specs


def _parse_md(line: str, schema: Schema, registry: SimilarityRegistry, ctx: _Line) -> MatchingDependency:
    m = _MD_RE.match(line)
    if not m:
        raise ctx.error("expected 'premise -> targets [sim ...]'")

    lhs_attrs = [_attribute_pair(schema, _LHS_RE, p, ctx) for p in _split_pairs(m.group("lhs"))]
    rhs_attrs = [_attribute_pair(schema, _RHS_RE, p, ctx) for p in _split_pairs(m.group("rhs"))]
    for side, pairs in (("premise", lhs_attrs), ("target", rhs_attrs)):
        if not pairs:
            raise ctx.error(f"empty {side}")
        if len(set(pairs)) != len(pairs):
            raise ctx.error(f"repeated {side} pair")

    specs = _similarity_list(m.group("sim") or "", ctx)
    if len(specs) > len(lhs_attrs):
        raise ctx.error(f"{len(specs)} similarities for {len(lhs_attrs)} premise pair(s)")

    lhs = []
    for i, (left, right) in enumerate(lhs_attrs):
        if i < len(specs):
            spec = parse_similarity(specs[i], left.tag, ctx)
        else:
            spec = registry.lookup(left, right)
        lhs.append(LhsPair(left, right, spec))
    rhs = [RhsPair(left, right) for left, right in rhs_attrs]

    try:
        return MatchingDependency(lhs[0].left.relation, lhs[0].right.relation, tuple(lhs), tuple(rhs))
    except ValueError as e:
        raise ctx.error(str(e)) from e


def parse_mds(source: str, schema: Schema, registry: Optional[SimilarityRegistry] = None) -> MDSet:
    """
    Parse an MD file into a normalized MDSet.

    Args:
        source: DSL text.
        schema: Schema the attributes must belong to.
        registry: Pair-wide similarity defaults; ``similarity`` lines add to it.

    Returns:
        MDSet bound to schema.

    Raises:
        MDParseError: On syntax errors, unknown attributes, tag mismatches,
            repeated pairs or a similarity that does not fit its attributes.
    """
    registry = registry if registry is not None else SimilarityRegistry()
    dependencies: list[MatchingDependency] = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        ctx = _Line(line_no, line)
        reg = _REGISTRY_RE.match(line)
        if reg:
            left, right = _attribute_pair(schema, _LHS_RE, reg.group("pair"), ctx)
            registry.register(left, right, parse_similarity(reg.group("spec"), left.tag, ctx))
            continue
        dependencies.append(_parse_md(line, schema, registry, ctx))
    return MDSet(tuple(dependencies), schema)


def load_mds(path: Path | str, schema: Schema) -> MDSet:
    """Parse an MD file."""
    return parse_mds(Path(path).read_text(encoding="utf-8"), schema)
