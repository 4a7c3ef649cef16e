"""Binding utilities shared by the query engine and the rule reasoner."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .rdf import AnyStore, Term, Triple, TriplePattern

Binding = dict[str, Term]


def substitute(pattern: TriplePattern, binding: Mapping[str, Term]) -> TriplePattern:
    """Replace bound variables in the pattern with their terms."""

    def walk(t: Term) -> Term:
        if t.is_variable and t.text in binding:
            return binding[t.text]
        return t

    return TriplePattern(walk(pattern.subject), walk(pattern.predicate), walk(pattern.object))


def unify(pattern: TriplePattern, statement: Triple, binding: Mapping[str, Term]) -> Binding | None:
    """Extend the binding so the pattern equals the statement, or None."""
    out: Binding = dict(binding)
    for pat_term, stmt_term in (
        (pattern.subject, statement.subject),
        (pattern.predicate, statement.predicate),
        (pattern.object, statement.object),
    ):
        if pat_term.is_variable:
            bound = out.get(pat_term.text)
            if bound is None:
                out[pat_term.text] = stmt_term
            elif bound != stmt_term:
                return None
        elif pat_term != stmt_term:
            return None
    return out


def extend(store: AnyStore, pattern: TriplePattern, binding: Binding) -> Iterator[Binding]:
    """All bindings extending ``binding`` with a store statement matching the pattern."""
    ground = substitute(pattern, binding)
    for statement in store.match(ground):
        extended = unify(ground, statement, binding)
        if extended is not None:
            yield extended


def join(store: AnyStore, patterns: Iterable[TriplePattern]) -> list[Binding]:
    """Conjunctive natural join of the patterns, left to right."""
    bindings: list[Binding] = [{}]
    for pattern in patterns:
        bindings = [ext for b in bindings for ext in extend(store, pattern, b)]
        if not bindings:
            break
    return bindings
