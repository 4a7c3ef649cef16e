"""Schema vocabulary extraction and statement validation.

The schema is itself expressed in triples: classes are declared with
``rdf:type owl:Class``, the class hierarchy with ``rdfs:subClassOf``, and
property constraints with ``rdfs:domain`` / ``rdfs:range``.  Multiple
domain (or range) declarations for one property enumerate the allowed
classes; a statement passes when its subject (or object) carries at least
one of them.  Validation checks asserted statements against the types
visible in a saturated store, so subclass lifting and inverse derivations
participate.  Each offending statement yields exactly one violation, with
every failed constraint folded into its reasons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CycleError, SchemaViolationError
from .rdf import RDF_TYPE, AnyStore, Term, TermKind, Triple, TriplePattern, intern_term

RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"

RDFS_DOMAIN = RDFS_NS + "domain"
RDFS_RANGE = RDFS_NS + "range"
RDFS_SUBCLASS_OF = RDFS_NS + "subClassOf"
OWL_CLASS = OWL_NS + "Class"
OWL_INVERSE_OF = OWL_NS + "inverseOf"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL_NS + "DatatypeProperty"


@dataclass(frozen=True)
class SchemaDef:
    classes: frozenset[str]
    object_properties: frozenset[str]
    data_properties: frozenset[str]
    domains: Mapping[str, frozenset[str]]
    ranges: Mapping[str, frozenset[str]]
    inverses: Mapping[str, str]
    subclasses: Mapping[str, frozenset[str]]  # class -> declared superclasses


@dataclass(frozen=True)
class SchemaViolation:
    statement: Triple
    reasons: tuple[str, ...]

    def message(self) -> str:
        s, p, o = self.statement.subject, self.statement.predicate, self.statement.object
        head = f"{_show(s)} {p.local_name} {_show(o)}"
        return head + ": " + "; ".join(self.reasons)


def _show(term: Term) -> str:
    if term.is_literal:
        return f'"{term.text}"'
    return term.local_name


def _iri(text: str) -> Term:
    return intern_term(TermKind.IRI, text)


def _objects(source: Iterable[Triple], predicate: str) -> dict[str, set[str]]:
    """subject IRI -> object IRIs for one predicate, IRI objects only."""
    out: dict[str, set[str]] = {}
    wanted = _iri(predicate)
    for statement in source:
        if statement.predicate == wanted and statement.object.is_iri:
            out.setdefault(statement.subject.text, set()).add(statement.object.text)
    return out


def _check_acyclic(edges: Mapping[str, set[str]]) -> None:
    state: dict[str, int] = {}  # 1 = on the current path, 2 = finished
    path: list[str] = []

    def visit(node: str) -> None:
        state[node] = 1
        path.append(node)
        for succ in sorted(edges.get(node, ())):
            mark = state.get(succ)
            if mark == 1:
                cycle = path[path.index(succ):] + [succ]
                names = " -> ".join(_iri(c).local_name for c in cycle)
                raise CycleError(f"subClassOf cycle: {names}")
            if mark is None:
                visit(succ)
        path.pop()
        state[node] = 2

    for start in sorted(edges):
        if start not in state:
            visit(start)


def build_schema(source: Iterable[Triple]) -> SchemaDef:
    """Collect schema declarations.

    Raises CycleError on a subClassOf cycle and SchemaViolationError when
    the declarations are inconsistent (a domain or range naming an
    undeclared class, or conflicting inverse pairs).
    """
    statements = list(source)
    classes = {
        s.subject.text
        for s in statements
        if s.predicate == RDF_TYPE and s.object == _iri(OWL_CLASS)
    }

    def typed(kind: str) -> set[str]:
        return {
            s.subject.text
            for s in statements
            if s.predicate == RDF_TYPE and s.object == _iri(kind)
        }

    subclass_edges = _objects(statements, RDFS_SUBCLASS_OF)
    _check_acyclic(subclass_edges)

    problems: list[str] = []
    domains = {p: frozenset(cs) for p, cs in _objects(statements, RDFS_DOMAIN).items()}
    ranges = {p: frozenset(cs) for p, cs in _objects(statements, RDFS_RANGE).items()}
    for label, table in (("domain", domains), ("range", ranges)):
        for prop, targets in sorted(table.items()):
            for target in sorted(targets - classes):
                problems.append(
                    f"{label} {_iri(target).local_name} of property "
                    f"{_iri(prop).local_name} is not a declared class"
                )

    inverses: dict[str, str] = {}
    for prop, targets in sorted(_objects(statements, OWL_INVERSE_OF).items()):
        for target in sorted(targets):
            for a, b in ((prop, target), (target, prop)):
                if inverses.get(a, b) != b:
                    problems.append(
                        f"property {_iri(a).local_name} declares two different inverses"
                    )
                inverses[a] = b
    if problems:
        raise SchemaViolationError(problems)

    return SchemaDef(
        classes=frozenset(classes),
        object_properties=frozenset(typed(OWL_OBJECT_PROPERTY)),
        data_properties=frozenset(typed(OWL_DATATYPE_PROPERTY)),
        domains=domains,
        ranges=ranges,
        inverses=inverses,
        subclasses={c: frozenset(cs) for c, cs in subclass_edges.items()},
    )


def _types_of(store: AnyStore, term: Term) -> set[str]:
    pattern = TriplePattern(term, RDF_TYPE, intern_term(TermKind.VARIABLE, "t"))
    return {statement.object.text for statement in store.match(pattern) if statement.object.is_iri}


def _one_of(classes: frozenset[str]) -> str:
    names = sorted(_iri(c).local_name for c in classes)
    return "a " + " or ".join(names)


def validate(schema: SchemaDef, store: AnyStore, statements: Iterable[Triple]) -> list[SchemaViolation]:
    """Check statements against declared domains and ranges.

    ``store`` supplies the type facts and should already be saturated.
    Statements whose predicate has no declared constraints pass; the
    result lists one violation per offending statement, sorted.
    """
    violations: list[SchemaViolation] = []
    for statement in sorted(set(statements), key=Triple.sort_key):
        predicate = statement.predicate.text
        domains = schema.domains.get(predicate)
        ranges = schema.ranges.get(predicate)
        reasons: list[str] = []
        if domains and not (_types_of(store, statement.subject) & domains):
            reasons.append(f"subject {_show(statement.subject)} is not {_one_of(domains)}")
        if statement.object.is_literal:
            if ranges:
                reasons.append(f"object is a literal but must be {_one_of(ranges)}")
            elif predicate in schema.object_properties:
                reasons.append("object of an object property must not be a literal")
        else:
            if ranges and not (_types_of(store, statement.object) & ranges):
                reasons.append(f"object {_show(statement.object)} is not {_one_of(ranges)}")
            if predicate in schema.data_properties:
                reasons.append("object of a data property must be a literal")
        if reasons:
            violations.append(SchemaViolation(statement, tuple(reasons)))
    return violations
