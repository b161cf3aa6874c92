"""
Parser for conjunctive queries.

Grammar::

    Q(x, y) :- R(x, y, 'c'), S(y, z), y = b1 or y = d1

Inside atoms, bare identifiers are variables while quoted strings and
integers are constants. On the right of ``=`` a bare identifier is a
variable if some atom uses it, otherwise a text constant.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import NamedTuple, Optional

from ..engine.instance import Schema
from ..engine.query import Atom, Const, ConjunctiveQuery, Equality, Term, Var
from ..exceptions import QueryParseError

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<string>'(?:[^'\\]|\\.)*'|"(?:[^"\\]|\\.)*")
      | (?P<int>-?\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>:-|[(),=.])
    )""",
    re.VERBOSE,
)


class _Token(NamedTuple):
    kind: str
    text: str


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    source = source.rstrip()
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m or m.end() == pos:
            raise QueryParseError(source, f"unexpected character at offset {pos}: {source[pos:pos + 10]!r}")
        kind = m.lastgroup or "op"
        tokens.append(_Token(kind, m.group(kind)))
        pos = m.end()
        while pos < len(source) and source[pos].isspace():
            pos += 1
    return tokens


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def error(self, detail: str) -> QueryParseError:
        return QueryParseError(self.source, detail)

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: Optional[str] = None, text: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of query")
        if (kind and tok.kind != kind) or (text and tok.text != text):
            raise self.error(f"expected {text or kind}, got {tok.text!r}")
        self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text == text:
            self.pos += 1
            return True
        return False

    def term(self) -> Term:
        tok = self.take()
        if tok.kind == "ident":
            return Var(tok.text)
        if tok.kind == "string":
            return Const(_unquote(tok.text))
        if tok.kind == "int":
            return Const(int(tok.text))
        raise self.error(f"expected a term, got {tok.text!r}")

    def term_list(self) -> list[Term]:
        self.take("op", "(")
        terms: list[Term] = []
        if self.accept(")"):
            return terms
        terms.append(self.term())
        while self.accept(","):
            terms.append(self.term())
        self.take("op", ")")
        return terms

    def parse(self) -> tuple[str, list[Term], list[Atom], list[list[tuple[Var, Term]]]]:
        name = self.take("ident").text
        head = self.term_list()
        self.take("op", ":-")

        atoms: list[Atom] = []
        conditions: list[list[tuple[Var, Term]]] = []
        while True:
            ident = self.take("ident")
            nxt = self.peek()
            if nxt is not None and nxt.text == "(":
                atoms.append(Atom(ident.text, tuple(self.term_list())))
            else:
                conditions.append(self.disjunction(ident))
            if not self.accept(","):
                break
        self.accept(".")
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek().text!r} after the body")
        return name, head, atoms, conditions

    def disjunction(self, first: _Token) -> list[tuple[Var, Term]]:
        alternatives = [self.equality(first)]
        while self.peek() is not None and self.peek().kind == "ident" and self.peek().text == "or":
            self.pos += 1
            alternatives.append(self.equality(self.take("ident")))
        return alternatives

    def equality(self, variable: _Token) -> tuple[Var, Term]:
        self.take("op", "=")
        return Var(variable.text), self.term()


def parse_query(source: str, schema: Optional[Schema] = None) -> ConjunctiveQuery:
    """
    Parse a query; validate it against schema when one is given.

    Raises:
        QueryParseError: On syntax errors, constants in the head, or a
            query that does not fit the schema.
        UnknownRelationError: If an atom names an undeclared relation.
    """
    lines = [line.split("#", 1)[0] for line in source.splitlines()]
    text = " ".join(part.strip() for part in lines if part.strip())
    if not text:
        raise QueryParseError(source, "empty query")

    name, head, atoms, raw_conditions = _Parser(text).parse()
    if any(not isinstance(t, Var) for t in head):
        raise QueryParseError(text, "head terms must be variables")
    if not atoms:
        raise QueryParseError(text, "query body has no atoms")

    used = {v for atom in atoms for v in atom.variables()}
    conditions = []
    for disjunction in raw_conditions:
        eqs = []
        for var, term in disjunction:
            if var.name not in used:
                raise QueryParseError(text, f"condition variable '{var}' does not occur in any atom")
            if isinstance(term, Var) and term.name not in used:
                term = Const(term.name)
            eqs.append(Equality(var, term))
        conditions.append(tuple(eqs))

    q = ConjunctiveQuery(name, tuple(head), tuple(atoms), tuple(conditions))
    if schema is not None:
        q.validate(schema)
    return q


def load_query(path: Path | str, schema: Optional[Schema] = None) -> ConjunctiveQuery:
    """Parse a ``.cq`` file."""
    return parse_query(Path(path).read_text(encoding="utf-8"), schema)
