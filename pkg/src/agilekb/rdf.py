"""Interned term model and indexed triple store with copy-on-write overlays.

Statements are ``Triple(subject, predicate, object)`` over interned ``Term``
values.  ``TripleStore`` keeps three orderings (SPO, POS, OSP) so any
pattern shape has a selective entry point; ``OverlayStore`` layers a
discardable write set on top of a read-only base for request-scoped
additions such as a temporary team individual.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Optional, Union

from .errors import MalformedTerm, StaleOverlay, StoreFrozen

RDF_TYPE_IRI = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"


class TermKind(Enum):
    IRI = "IRI"
    LITERAL = "Literal"
    VARIABLE = "Variable"


@dataclass(frozen=True, slots=True)
class Term:
    """An IRI, a literal, or a pattern variable.

    ``text`` carries the full IRI, the literal's lexical value, or the
    variable name without its leading marker.  ``datatype`` is only set on
    literals; ``None`` means a plain string.  Equality and hashing cover
    all three fields, so literals with different datatypes are distinct.
    """

    kind: TermKind
    text: str
    datatype: Optional[str] = None

    @property
    def is_iri(self) -> bool:
        return self.kind is TermKind.IRI

    @property
    def is_literal(self) -> bool:
        return self.kind is TermKind.LITERAL

    @property
    def is_variable(self) -> bool:
        return self.kind is TermKind.VARIABLE

    @property
    def local_name(self) -> str:
        """Rightmost path segment of an IRI; the full text for other kinds."""
        if not self.is_iri:
            return self.text
        for sep in ("#", "/"):
            if sep in self.text:
                return self.text.rsplit(sep, 1)[1] or self.text
        return self.text

    def sort_key(self) -> tuple[str, int, str]:
        # IRIs sort before literals when the lexical text ties.
        return (self.text, 0 if self.kind is TermKind.IRI else 1, self.datatype or "")

    def __repr__(self) -> str:
        if self.is_iri:
            return f"<{self.text}>"
        if self.is_variable:
            return f"?{self.text}"
        if self.datatype:
            return f'"{self.text}"^^<{self.datatype}>'
        return f'"{self.text}"'


_WHITESPACE = set(" \t\r\n")


@lru_cache(maxsize=None)
def _intern(kind: TermKind, text: str, datatype: Optional[str]) -> Term:
    return Term(kind, text, datatype)


def intern_term(kind: TermKind, text: str, datatype: Optional[str] = None) -> Term:
    """Return the canonical Term for (kind, text, datatype).

    Raises MalformedTerm for empty text, whitespace inside an IRI or
    variable name, or a datatype on a non-literal.
    """
    if not text:
        raise MalformedTerm("term text must be non-empty")
    if datatype is not None:
        if kind is not TermKind.LITERAL:
            raise MalformedTerm("only literals may carry a datatype")
        if not datatype or _WHITESPACE.intersection(datatype):
            raise MalformedTerm(f"malformed datatype IRI: {datatype!r}")
    if kind is not TermKind.LITERAL and _WHITESPACE.intersection(text):
        raise MalformedTerm(f"{kind.value} text may not contain whitespace: {text!r}")
    return _intern(kind, text, datatype)


def iri(text: str) -> Term:
    return intern_term(TermKind.IRI, text)


def literal(text: str, datatype: Optional[str] = None) -> Term:
    return intern_term(TermKind.LITERAL, text, datatype)


def variable(name: str) -> Term:
    return intern_term(TermKind.VARIABLE, name)


RDF_TYPE = iri(RDF_TYPE_IRI)


@dataclass(frozen=True, slots=True)
class Triple:
    """One stored statement: subject and predicate are IRIs, object is an IRI or literal."""

    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if not self.subject.is_iri:
            raise MalformedTerm(f"triple subject must be an IRI, got {self.subject!r}")
        if not self.predicate.is_iri:
            raise MalformedTerm(f"triple predicate must be an IRI, got {self.predicate!r}")
        if self.object.is_variable:
            raise MalformedTerm(f"triple object may not be a variable: {self.object!r}")

    def sort_key(self):
        return (self.subject.sort_key(), self.predicate.sort_key(), self.object.sort_key())

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """A statement template; any position may be a variable."""

    subject: Term
    predicate: Term
    object: Term

    def variables(self) -> set[str]:
        return {t.text for t in (self.subject, self.predicate, self.object) if t.is_variable}

    def matches(self, t: Triple) -> bool:
        return (
            (self.subject.is_variable or self.subject == t.subject)
            and (self.predicate.is_variable or self.predicate == t.predicate)
            and (self.object.is_variable or self.object == t.object)
        )


def _index_add(index: dict, a: Term, b: Term, c: Term) -> None:
    index.setdefault(a, {}).setdefault(b, set()).add(c)


def _index_remove(index: dict, a: Term, b: Term, c: Term) -> None:
    level = index[a]
    cell = level[b]
    cell.discard(c)
    if not cell:
        del level[b]
        if not level:
            del index[a]


class TripleStore:
    """Indexed statement set.

    Concurrency contract: any number of readers, or exactly one writer.
    Mutations take an internal lock so writers serialize; readers are not
    synchronized and must not run concurrently with a writer.  ``generation``
    increments on every effective mutation, which lets overlays detect that
    their base moved underneath them.
    """

    def __init__(self):
        self._statements: set[Triple] = set()
        self._spo: dict = {}
        self._pos: dict = {}
        self._osp: dict = {}
        self.generation = 0
        self._frozen = False
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._statements)

    def __contains__(self, t: Triple) -> bool:
        return t in self._statements

    @property
    def statements(self) -> frozenset[Triple]:
        return frozenset(self._statements)

    def freeze(self) -> None:
        """Make the store permanently read-only."""
        self._frozen = True

    def insert(self, t: Triple) -> bool:
        """Add a statement; True iff it was absent. Generation moves only on change."""
        with self._write_lock:
            if self._frozen:
                raise StoreFrozen("store is read-only")
            if t in self._statements:
                return False
            self._statements.add(t)
            _index_add(self._spo, t.subject, t.predicate, t.object)
            _index_add(self._pos, t.predicate, t.object, t.subject)
            _index_add(self._osp, t.object, t.subject, t.predicate)
            self.generation += 1
            return True

    def remove(self, t: Triple) -> bool:
        """Drop a statement; True iff it was present."""
        with self._write_lock:
            if self._frozen:
                raise StoreFrozen("store is read-only")
            if t not in self._statements:
                return False
            self._statements.discard(t)
            _index_remove(self._spo, t.subject, t.predicate, t.object)
            _index_remove(self._pos, t.predicate, t.object, t.subject)
            _index_remove(self._osp, t.object, t.subject, t.predicate)
            self.generation += 1
            return True

    def _candidates(self, p: TriplePattern) -> Iterator[Triple]:
        s_bound = not p.subject.is_variable
        p_bound = not p.predicate.is_variable
        o_bound = not p.object.is_variable
        if s_bound and p_bound:
            for o in self._spo.get(p.subject, {}).get(p.predicate, ()):
                yield Triple(p.subject, p.predicate, o)
        elif p_bound and o_bound:
            for s in self._pos.get(p.predicate, {}).get(p.object, ()):
                yield Triple(s, p.predicate, p.object)
        elif s_bound and o_bound:
            for pred in self._osp.get(p.object, {}).get(p.subject, ()):
                yield Triple(p.subject, pred, p.object)
        elif s_bound:
            for pred, objs in self._spo.get(p.subject, {}).items():
                for o in objs:
                    yield Triple(p.subject, pred, o)
        elif p_bound:
            for o, subs in self._pos.get(p.predicate, {}).items():
                for s in subs:
                    yield Triple(s, p.predicate, o)
        elif o_bound:
            for s, preds in self._osp.get(p.object, {}).items():
                for pred in preds:
                    yield Triple(s, pred, p.object)
        else:
            yield from self._statements

    def match(self, p: TriplePattern) -> list[Triple]:
        """Statements agreeing with the pattern on every non-variable position.

        Deterministic: results come back in (subject, predicate, object)
        lexicographic order of the full IRI/literal text.
        """
        found = [t for t in self._candidates(p) if p.matches(t)]
        found.sort(key=Triple.sort_key)
        return found

    def iter_by_subject(self) -> Iterator[Triple]:
        yield from self._statements

    def overlay(self) -> "OverlayStore":
        return OverlayStore(self)


class OverlayStore:
    """Copy-on-write layer over a TripleStore.

    Reads see base plus the overlay's own additions; the base is never
    touched.  Every read checks that the base generation still matches
    the snapshot taken at creation and raises StaleOverlay otherwise.
    An overlay belongs to the request that created it and must not be
    shared across concurrent activities.
    """

    def __init__(self, base: TripleStore):
        self.base = base
        self.base_generation = base.generation
        self._added = TripleStore()

    def _check_fresh(self) -> None:
        if self.base.generation != self.base_generation:
            raise StaleOverlay(
                f"base store mutated (generation {self.base.generation} != "
                f"snapshot {self.base_generation})"
            )

    @property
    def added(self) -> frozenset[Triple]:
        self._check_fresh()
        return self._added.statements

    @property
    def statements(self) -> frozenset[Triple]:
        self._check_fresh()
        return self.base.statements | self._added.statements

    def __len__(self) -> int:
        self._check_fresh()
        return len(self.base) + len(self._added)

    def __contains__(self, t: Triple) -> bool:
        self._check_fresh()
        return t in self.base or t in self._added

    def insert(self, t: Triple) -> bool:
        """Add to the overlay; inserting a triple the base already holds is a no-op."""
        self._check_fresh()
        if t in self.base:
            return False
        return self._added.insert(t)

    def match(self, p: TriplePattern) -> list[Triple]:
        self._check_fresh()
        if not len(self._added):
            return self.base.match(p)
        merged = self.base.match(p) + self._added.match(p)
        merged.sort(key=Triple.sort_key)
        return merged


AnyStore = Union[TripleStore, OverlayStore]
