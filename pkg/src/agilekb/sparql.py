"""Query parsing and evaluation for a SELECT-style query subset.

Supported shape:

    PREFIX label: <iri> ...
    SELECT [DISTINCT] (?var ... | *)
    WHERE { pattern . pattern . FILTER(...) ... }
    [ORDER BY ?var | ASC(?var) | DESC(?var)]
    [LIMIT n]

Filter constraints are ``?var = term``, ``?var != term``, and
``regex(?var, "pattern")``; regex uses unanchored search semantics over
the term text.  Results come back in a stable canonical order (sorted by
the solution bindings), with ORDER BY applied as a stable re-sort on top,
so repeated runs of the same query return identical tables.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Optional, Union

from .errors import MalformedTerm, ParseError, UnboundVariable, UnknownPrefix
from .patterns import Binding, extend
from .rdf import RDF_TYPE, AnyStore, Term, TermKind, TriplePattern, intern_term


@dataclass(frozen=True)
class Comparison:
    variable: str
    negated: bool
    term: Term

    def passes(self, binding: Mapping[str, Term]) -> bool:
        equal = binding[self.variable] == self.term
        return not equal if self.negated else equal


@dataclass(frozen=True)
class RegexMatch:
    variable: str
    pattern: str

    def passes(self, binding: Mapping[str, Term]) -> bool:
        return re.search(self.pattern, binding[self.variable].text) is not None


Filter = Union[Comparison, RegexMatch]


@dataclass(frozen=True)
class SelectQuery:
    distinct: bool
    projection: Optional[tuple[str, ...]]  # None means SELECT *
    patterns: tuple[TriplePattern, ...]
    filters: tuple[Filter, ...]
    order_var: Optional[str]
    order_desc: bool
    limit: Optional[int]


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]

    def __len__(self) -> int:
        return len(self.rows)


class _Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


# Local names may contain interior dots, but a trailing dot is always the
# statement separator, so dots only join when more name characters follow.
_TOKEN_RE = re.compile(
    r"""(?P<iriref><[^<>\s]*>)
      | (?P<string>"(?:[^"\\\n]|\\.)*")
      | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
      | (?P<pname>(?:[A-Za-z][A-Za-z0-9_-]*)?:(?:[A-Za-z0-9_-]+(?:\.[A-Za-z0-9_-]+)*)?)
      | (?P<number>\d+)
      | (?P<dtype>\^\^)
      | (?P<neq>!=)
      | (?P<punct>[{}().,=*])
      | (?P<word>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}


def _unescape(raw: str, line: int, column: int) -> str:
    out: list[str] = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch == "\\":
            code = raw[i + 1] if i + 1 < len(raw) else ""
            if code not in _ESCAPES:
                raise ParseError(f"unknown string escape \\{code}", line, column)
            out.append(_ESCAPES[code])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _tokenize(text: str) -> list[_Token]:
    line_starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            line_starts.append(i + 1)

    def position(offset: int) -> tuple[int, int]:
        row = bisect.bisect_right(line_starts, offset) - 1
        return row + 1, offset - line_starts[row] + 1

    tokens: list[_Token] = []
    pos = 0
    size = len(text)
    while pos < size:
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
            continue
        if ch == "#":
            end = text.find("\n", pos)
            pos = size if end < 0 else end + 1
            continue
        match = _TOKEN_RE.match(text, pos)
        line, column = position(pos)
        if not match:
            raise ParseError(f"unexpected character {ch!r}", line, column)
        tokens.append(_Token(match.lastgroup or "", match.group(), line, column))
        pos = match.end()
    line, column = position(size)
    tokens.append(_Token("eof", "", line, column))
    return tokens


class _QueryParser:
    def __init__(self, tokens: list[_Token], prefixes: dict[str, str]):
        self._tokens = tokens
        self._pos = 0
        self._prefixes = prefixes

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _next(self) -> _Token:
        token = self._tokens[self._pos]
        if token.kind != "eof":
            self._pos += 1
        return token

    def _error(self, message: str, token: _Token) -> ParseError:
        return ParseError(message, token.line, token.column)

    def _keyword(self) -> str:
        token = self._peek()
        return token.value.upper() if token.kind == "word" else ""

    def _expect_word(self, word: str) -> None:
        token = self._next()
        if token.kind != "word" or token.value.upper() != word:
            raise self._error(f"expected {word}", token)

    def _expect_punct(self, value: str) -> None:
        token = self._next()
        if token.kind != "punct" or token.value != value:
            raise self._error(f"expected {value!r}", token)

    def _intern(self, kind: TermKind, text: str, token: _Token, datatype: Optional[str] = None) -> Term:
        try:
            return intern_term(kind, text, datatype)
        except MalformedTerm as exc:
            raise self._error(str(exc), token) from exc

    def parse(self) -> SelectQuery:
        while self._keyword() == "PREFIX":
            self._next()
            self._parse_prefix()
        self._expect_word("SELECT")
        distinct = False
        if self._keyword() == "DISTINCT":
            self._next()
            distinct = True
        projection = self._parse_projection()
        self._expect_word("WHERE")
        brace = self._peek()
        self._expect_punct("{")
        patterns, filters = self._parse_group()
        if not patterns:
            raise self._error("WHERE group needs at least one triple pattern", brace)
        order_var: Optional[str] = None
        order_desc = False
        if self._keyword() == "ORDER":
            self._next()
            self._expect_word("BY")
            order_var, order_desc = self._parse_order_target()
        limit: Optional[int] = None
        if self._keyword() == "LIMIT":
            self._next()
            token = self._next()
            if token.kind != "number" or int(token.value) < 1:
                raise self._error("LIMIT needs a positive integer", token)
            limit = int(token.value)
        token = self._peek()
        if token.kind != "eof":
            raise self._error(f"unexpected trailing {token.value!r}", token)

        available = set(_pattern_variables(patterns))
        if projection is not None:
            for name in projection:
                if name not in available:
                    raise UnboundVariable(name)
        for constraint in filters:
            if constraint.variable not in available:
                raise UnboundVariable(constraint.variable)
        if order_var is not None and order_var not in available:
            raise UnboundVariable(order_var)
        return SelectQuery(distinct, projection, patterns, filters, order_var, order_desc, limit)

    def _parse_prefix(self) -> None:
        token = self._next()
        if token.kind != "pname" or not token.value.endswith(":"):
            raise self._error("expected a namespace label ending in ':'", token)
        label = token.value[:-1]
        target = self._next()
        if target.kind != "iriref":
            raise self._error("expected <iri> after the PREFIX label", target)
        self._prefixes[label] = target.value[1:-1]

    def _parse_projection(self) -> Optional[tuple[str, ...]]:
        token = self._peek()
        if token.kind == "punct" and token.value == "*":
            self._next()
            return None
        names: list[str] = []
        while self._peek().kind == "var":
            var = self._next()
            name = var.value[1:]
            if name in names:
                raise self._error(f"duplicate projection variable ?{name}", var)
            names.append(name)
        if not names:
            raise self._error("SELECT needs ?variables or *", token)
        return tuple(names)

    def _parse_order_target(self) -> tuple[str, bool]:
        keyword = self._keyword()
        if keyword in ("ASC", "DESC"):
            self._next()
            self._expect_punct("(")
            var = self._next()
            if var.kind != "var":
                raise self._error("ORDER BY needs a ?variable", var)
            self._expect_punct(")")
            return var.value[1:], keyword == "DESC"
        var = self._next()
        if var.kind != "var":
            raise self._error("ORDER BY needs a ?variable", var)
        return var.value[1:], False

    def _parse_group(self) -> tuple[tuple[TriplePattern, ...], tuple[Filter, ...]]:
        patterns: list[TriplePattern] = []
        filters: list[Filter] = []
        while True:
            token = self._peek()
            if token.kind == "punct" and token.value == "}":
                self._next()
                break
            if token.kind == "eof":
                raise self._error("unterminated WHERE group", token)
            if self._keyword() == "FILTER":
                self._next()
                filters.append(self._parse_filter())
            else:
                patterns.append(self._parse_pattern())
            if self._peek().kind == "punct" and self._peek().value == ".":
                self._next()
        return tuple(patterns), tuple(filters)

    def _parse_pattern(self) -> TriplePattern:
        subject = self._parse_term("subject")
        predicate = self._parse_term("predicate")
        obj = self._parse_term("object")
        return TriplePattern(subject, predicate, obj)

    def _parse_term(self, position: str) -> Term:
        token = self._next()
        if token.kind == "var":
            return self._intern(TermKind.VARIABLE, token.value[1:], token)
        if token.kind == "iriref":
            return self._intern(TermKind.IRI, token.value[1:-1], token)
        if token.kind == "pname":
            return self._intern(TermKind.IRI, self._expand(token), token)
        if token.kind == "word" and token.value == "a" and position == "predicate":
            return RDF_TYPE
        if token.kind == "string" and position == "object":
            return self._parse_literal(token)
        raise self._error(f"bad {position} term {token.value!r}", token)

    def _expand(self, token: _Token) -> str:
        label, local = token.value.split(":", 1)
        namespace = self._prefixes.get(label)
        if namespace is None:
            raise UnknownPrefix(label, token.line, token.column)
        return namespace + local

    def _parse_literal(self, token: _Token) -> Term:
        text = _unescape(token.value[1:-1], token.line, token.column)
        datatype: Optional[str] = None
        if self._peek().kind == "dtype":
            self._next()
            dtok = self._next()
            if dtok.kind == "iriref":
                datatype = dtok.value[1:-1]
            elif dtok.kind == "pname":
                datatype = self._expand(dtok)
            else:
                raise self._error("expected a datatype IRI after ^^", dtok)
        return self._intern(TermKind.LITERAL, text, token, datatype)

    def _parse_filter(self) -> Filter:
        # regex(...) carries its own parens; comparisons require the outer pair.
        if self._keyword() == "REGEX":
            self._next()
            return self._parse_regex()
        self._expect_punct("(")
        token = self._peek()
        if token.kind == "word" and token.value.upper() == "REGEX":
            self._next()
            constraint: Filter = self._parse_regex()
        elif token.kind == "var":
            constraint = self._parse_comparison()
        else:
            raise self._error('FILTER supports ?v = term, ?v != term, regex(?v, "...")', token)
        self._expect_punct(")")
        return constraint

    def _parse_comparison(self) -> Comparison:
        variable = self._next().value[1:]
        op = self._next()
        if op.kind == "neq":
            negated = True
        elif op.kind == "punct" and op.value == "=":
            negated = False
        else:
            raise self._error("expected = or != in FILTER", op)
        token = self._next()
        if token.kind == "iriref":
            term = self._intern(TermKind.IRI, token.value[1:-1], token)
        elif token.kind == "pname":
            term = self._intern(TermKind.IRI, self._expand(token), token)
        elif token.kind == "string":
            term = self._parse_literal(token)
        else:
            raise self._error("comparison needs an IRI or literal", token)
        return Comparison(variable, negated, term)

    def _parse_regex(self) -> RegexMatch:
        self._expect_punct("(")
        vtok = self._next()
        if vtok.kind != "var":
            raise self._error("regex needs a ?variable first", vtok)
        self._expect_punct(",")
        stok = self._next()
        if stok.kind != "string":
            raise self._error("regex needs a quoted pattern", stok)
        pattern = _unescape(stok.value[1:-1], stok.line, stok.column)
        try:
            re.compile(pattern)
        except re.error as exc:
            raise self._error(f"bad regex pattern: {exc}", stok) from exc
        self._expect_punct(")")
        return RegexMatch(vtok.value[1:], pattern)


def parse_query(text: str, base_prefixes: Optional[Mapping[str, str]] = None) -> SelectQuery:
    """Parse query text; ``base_prefixes`` seed the PREFIX table."""
    prefixes = dict(base_prefixes or {})
    return _QueryParser(_tokenize(text), prefixes).parse()


def _pattern_variables(patterns: tuple[TriplePattern, ...]) -> list[str]:
    """Variable names in first-occurrence order across the patterns."""
    ordered: list[str] = []
    seen: set[str] = set()
    for pattern in patterns:
        for term in (pattern.subject, pattern.predicate, pattern.object):
            if term.is_variable and term.text not in seen:
                seen.add(term.text)
                ordered.append(term.text)
    return ordered


def _plan(patterns: tuple[TriplePattern, ...]) -> list[int]:
    """Greedy join order: always take the pattern with fewest unbound variables."""
    order: list[int] = []
    bound: set[str] = set()
    remaining = list(range(len(patterns)))
    while remaining:
        best = min(remaining, key=lambda i: (len(patterns[i].variables() - bound), i))
        remaining.remove(best)
        order.append(best)
        bound |= patterns[best].variables()
    return order


def evaluate(store: AnyStore, query: SelectQuery) -> ResultTable:
    """Run the query against the store.

    The query is assumed well formed (parse_query checks that projected,
    filtered, and ordering variables all occur in the patterns).
    """
    ordered_vars = _pattern_variables(query.patterns)
    columns = tuple(ordered_vars) if query.projection is None else query.projection

    bindings: list[Binding] = [{}]
    for index in _plan(query.patterns):
        pattern = query.patterns[index]
        bindings = [ext for b in bindings for ext in extend(store, pattern, b)]
        if not bindings:
            break
    solutions = [b for b in bindings if all(c.passes(b) for c in query.filters)]
    solutions.sort(key=lambda b: tuple(b[v].sort_key() for v in ordered_vars))
    if query.order_var is not None:
        solutions.sort(key=lambda b: b[query.order_var].sort_key(), reverse=query.order_desc)

    rows = [tuple(b[name] for name in columns) for b in solutions]
    if query.distinct:
        seen_rows: set[tuple[Term, ...]] = set()
        unique: list[tuple[Term, ...]] = []
        for row in rows:
            if row not in seen_rows:
                seen_rows.add(row)
                unique.append(row)
        rows = unique
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultTable(columns, tuple(rows))


def run_query(store: AnyStore, text: str, base_prefixes: Optional[Mapping[str, str]] = None) -> ResultTable:
    return evaluate(store, parse_query(text, base_prefixes))
