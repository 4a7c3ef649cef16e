"""Turtle-subset reader and writer, plus a canonical content hash.

The accepted grammar: ``@prefix`` directives, statements terminated by
``.``, predicate lists with ``;``, object lists with ``,``, ``a`` for
rdf:type, double-quoted string literals, full IRIs in angle brackets,
prefixed names, and ``#`` line comments.  Typed literals (``"x"^^<dt>``)
and the escapes ``\\" \\\\ \\n \\r \\t`` are accepted so any in-memory
statement set can round-trip.  No base directive, no relative IRIs, no
blank nodes.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import MalformedTerm, ParseError, UnknownPrefix
from .rdf import RDF_TYPE, RDF_TYPE_IRI, Term, TermKind, Triple, intern_term


@dataclass
class Document:
    """A parsed ontology file: prefix table plus statements in source order."""

    prefixes: dict[str, str] = field(default_factory=dict)
    triples: list[Triple] = field(default_factory=list)


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}

_PREFIX_LABEL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*$")
_LOCAL_NAME_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.-]*$")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'iriref' | 'pname' | 'string' | 'punct' | 'name' | 'directive'
    value: str
    line: int
    column: int
    datatype_raw: Optional[tuple[str, str]] = None  # ('iriref'|'pname', text) for strings


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def error(self, message: str, line: int | None = None, column: int | None = None):
        raise ParseError(message, line or self.line, column or self.column)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _skip_trivia(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def _read_iriref(self) -> _Token:
        line, col = self.line, self.column
        self._advance()  # '<'
        start = self.pos
        while True:
            c = self._peek()
            if c == "":
                self.error("unterminated IRI", line, col)
            if c == ">":
                break
            if c in " \t\r\n<":
                self.error(f"illegal character {c!r} inside IRI", self.line, self.column)
            self._advance()
        value = self.text[start : self.pos]
        self._advance()  # '>'
        if not value:
            self.error("empty IRI", line, col)
        return _Token("iriref", value, line, col)

    def _read_string(self) -> _Token:
        line, col = self.line, self.column
        self._advance()  # opening quote
        out: list[str] = []
        while True:
            c = self._peek()
            if c == "" or c == "\n":
                self.error("unterminated string literal", line, col)
            if c == '"':
                self._advance()
                break
            if c == "\\":
                esc = self._peek(1)
                if esc not in _ESCAPES:
                    self.error(f"unknown escape sequence \\{esc}", self.line, self.column)
                out.append(_ESCAPES[esc])
                self._advance(2)
                continue
            out.append(c)
            self._advance()
        datatype_raw = None
        if self._peek() == "^" and self._peek(1) == "^":
            self._advance(2)
            if self._peek() == "<":
                dt = self._read_iriref()
                datatype_raw = ("iriref", dt.value)
            else:
                dt = self._read_name_or_pname()
                if dt.kind != "pname":
                    self.error("expected IRI or prefixed name after ^^", dt.line, dt.column)
                datatype_raw = ("pname", dt.value)
        return _Token("string", "".join(out), line, col, datatype_raw)

    @staticmethod
    def _is_name_char(c: str) -> bool:
        return c.isalnum() or c == "_" or c == "-"

    def _scan_name(self) -> str:
        # Greedy name scan; a '.' is part of the name only when a name
        # character follows, so statement-terminating dots stay separate.
        start = self.pos
        while True:
            c = self._peek()
            if self._is_name_char(c):
                self._advance()
            elif c == "." and self._is_name_char(self._peek(1)):
                self._advance()
            else:
                return self.text[start : self.pos]

    def _read_name_or_pname(self) -> _Token:
        line, col = self.line, self.column
        label = self._scan_name()
        if self._peek() == ":":
            self._advance()
            local = self._scan_name()
            return _Token("pname", f"{label}:{local}", line, col)
        if not label:
            self.error(f"unexpected character {self._peek()!r}")
        return _Token("name", label, line, col)

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            self._skip_trivia()
            if self.pos >= len(self.text):
                return out
            c = self._peek()
            line, col = self.line, self.column
            if c == "<":
                out.append(self._read_iriref())
            elif c == '"':
                out.append(self._read_string())
            elif c in ".;,":
                self._advance()
                out.append(_Token("punct", c, line, col))
            elif c == "@":
                self._advance()
                word = self._read_name_or_pname()
                if word.kind != "name":
                    self.error("malformed directive", line, col)
                out.append(_Token("directive", word.value, line, col))
            else:
                out.append(self._read_name_or_pname())


class _Parser:
    def __init__(self, text: str):
        self.tokens = _Tokenizer(text).tokens()
        self.index = 0
        self.doc = Document()

    def _peek(self) -> Optional[_Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _next(self, expect: str | None = None) -> _Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(
                "unexpected end of input",
                last.line if last else 1,
                last.column if last else 1,
            )
        if expect is not None and (tok.kind, tok.value) != ("punct", expect):
            raise ParseError(f"expected {expect!r}, got {tok.value!r}", tok.line, tok.column)
        self.index += 1
        return tok

    def _resolve_pname(self, tok: _Token) -> str:
        label, local = tok.value.split(":", 1)
        if label not in self.doc.prefixes:
            raise UnknownPrefix(label, tok.line, tok.column)
        return self.doc.prefixes[label] + local

    def _term_from(self, tok: _Token, position: str) -> Term:
        try:
            if tok.kind == "iriref":
                return intern_term(TermKind.IRI, tok.value)
            if tok.kind == "pname":
                return intern_term(TermKind.IRI, self._resolve_pname(tok))
            if tok.kind == "string":
                if position != "object":
                    raise ParseError(
                        f"literal not allowed as {position}", tok.line, tok.column
                    )
                datatype = None
                if tok.datatype_raw is not None:
                    kind, raw = tok.datatype_raw
                    datatype = raw if kind == "iriref" else self._resolve_pname(
                        _Token("pname", raw, tok.line, tok.column)
                    )
                return intern_term(TermKind.LITERAL, tok.value, datatype)
            if tok.kind == "name" and tok.value == "a" and position == "predicate":
                return RDF_TYPE
        except MalformedTerm as exc:
            raise ParseError(str(exc), tok.line, tok.column) from exc
        raise ParseError(f"unexpected token {tok.value!r}", tok.line, tok.column)

    def _parse_prefix_directive(self, directive: _Token) -> None:
        label_tok = self._next()
        if label_tok.kind != "pname" or not label_tok.value.endswith(":"):
            # A bare "label:" tokenizes as a pname with empty local part.
            raise ParseError("expected prefix label", label_tok.line, label_tok.column)
        label = label_tok.value[:-1]
        if label and not _PREFIX_LABEL_RE.match(label):
            raise ParseError(f"illegal prefix label {label!r}", label_tok.line, label_tok.column)
        ns_tok = self._next()
        if ns_tok.kind != "iriref":
            raise ParseError("expected namespace IRI", ns_tok.line, ns_tok.column)
        self._next(expect=".")
        self.doc.prefixes[label] = ns_tok.value

    def _parse_statement(self) -> None:
        subj = self._term_from(self._next(), "subject")
        while True:
            pred = self._term_from(self._next(), "predicate")
            while True:
                obj = self._term_from(self._next(), "object")
                self.doc.triples.append(Triple(subj, pred, obj))
                tok = self._peek()
                if tok and tok.kind == "punct" and tok.value == ",":
                    self._next()
                    continue
                break
            tok = self._peek()
            if tok and tok.kind == "punct" and tok.value == ";":
                self._next()
                # Tolerate a trailing ';' right before the closing dot.
                nxt = self._peek()
                if nxt and nxt.kind == "punct" and nxt.value == ".":
                    break
                continue
            break
        self._next(expect=".")

    def parse(self) -> Document:
        while True:
            tok = self._peek()
            if tok is None:
                return self.doc
            if tok.kind == "directive":
                self._next()
                if tok.value != "prefix":
                    raise ParseError(f"unsupported directive @{tok.value}", tok.line, tok.column)
                self._parse_prefix_directive(tok)
            else:
                self._parse_statement()


def parse_turtle(text: str) -> Document:
    """Parse Turtle-subset text into a Document with fully expanded IRIs."""
    return _Parser(text).parse()


def _escape_literal(value: str) -> str:
    return "".join(_UNESCAPES.get(c, c) for c in value)


def _abbreviate(iri_text: str, prefixes_by_ns: list[tuple[str, str]]) -> str:
    # prefixes_by_ns is sorted longest namespace first.
    for ns, label in prefixes_by_ns:
        if iri_text.startswith(ns):
            local = iri_text[len(ns) :]
            if local and _LOCAL_NAME_RE.match(local) and not local.endswith("."):
                return f"{label}:{local}"
    return f"<{iri_text}>"


def _render_term(t: Term, prefixes_by_ns: list[tuple[str, str]], position: str) -> str:
    if t.kind is TermKind.IRI:
        if position == "predicate" and t.text == RDF_TYPE_IRI:
            return "a"
        return _abbreviate(t.text, prefixes_by_ns)
    rendered = f'"{_escape_literal(t.text)}"'
    if t.datatype:
        rendered += f"^^{_abbreviate(t.datatype, prefixes_by_ns)}"
    return rendered


def serialize_turtle(doc: Document) -> str:
    """Render a Document so that re-parsing yields an equal triple set.

    Statements are emitted one per line, sorted lexicographically, with the
    longest matching prefix applied to each IRI.
    """
    lines: list[str] = []
    for label in sorted(doc.prefixes):
        lines.append(f"@prefix {label}: <{doc.prefixes[label]}> .")
    if doc.prefixes and doc.triples:
        lines.append("")
    prefixes_by_ns = sorted(
        ((ns, label) for label, ns in doc.prefixes.items()),
        key=lambda pair: (-len(pair[0]), pair[1]),
    )
    for t in sorted(set(doc.triples), key=Triple.sort_key):
        s = _render_term(t.subject, prefixes_by_ns, "subject")
        p = _render_term(t.predicate, prefixes_by_ns, "predicate")
        o = _render_term(t.object, prefixes_by_ns, "object")
        lines.append(f"{s} {p} {o} .")
    return "\n".join(lines) + ("\n" if lines else "")


def _ntriples_line(t: Triple) -> str:
    def render(term: Term) -> str:
        if term.kind is TermKind.IRI:
            return f"<{term.text}>"
        rendered = f'"{_escape_literal(term.text)}"'
        if term.datatype:
            rendered += f"^^<{term.datatype}>"
        return rendered

    return f"{render(t.subject)} {render(t.predicate)} {render(t.object)} ."


def content_hash(source: Union[Document, Iterable[Triple]]) -> str:
    """SHA-256 over the sorted, fully expanded N-Triples-style rendering.

    Equal statement sets hash equal regardless of source formatting or
    prefix names; the empty set hashes to sha256 of the empty string.
    """
    triples = source.triples if isinstance(source, Document) else source
    lines = sorted(_ntriples_line(t) for t in set(triples))
    payload = "".join(line + "\n" for line in lines)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
