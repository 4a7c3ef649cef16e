"""Knowledge-base engine and decision support for agile practice adoption."""

from .cache import ResultCache
from .catalog import Catalog
from .concerns import Concern, ConcernRegistry, bind_query, make_team_variant, parse_concerns
from .errors import (
    CycleError,
    DuplicateConcern,
    InvalidProfile,
    KbError,
    MalformedTerm,
    MissingParameter,
    NotFound,
    ParseError,
    ResourceLimit,
    SchemaViolationError,
    StaleOverlay,
    StoreFrozen,
    UnboundVariable,
    UnknownConcern,
    UnknownPrefix,
    UnsafeRule,
)
from .kb import (
    DEFAULT_NAMESPACE,
    KnowledgeBase,
    PracticeAdvice,
    RecommendationReport,
    TeamProfile,
    TraceNode,
    load_knowledge_base,
)
from .rdf import OverlayStore, Term, TermKind, Triple, TriplePattern, TripleStore, iri, literal, variable
from .rules import DerivationTrace, Rule, RuleSet, explain, parse_rules, saturate
from .schema import SchemaDef, SchemaViolation, build_schema, validate
from .sparql import ResultTable, SelectQuery, evaluate, parse_query, run_query
from .turtle_io import content_hash, parse_turtle, serialize_turtle

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "Concern",
    "ConcernRegistry",
    "CycleError",
    "DEFAULT_NAMESPACE",
    "DerivationTrace",
    "DuplicateConcern",
    "InvalidProfile",
    "KbError",
    "KnowledgeBase",
    "MalformedTerm",
    "MissingParameter",
    "NotFound",
    "OverlayStore",
    "ParseError",
    "PracticeAdvice",
    "RecommendationReport",
    "ResourceLimit",
    "ResultCache",
    "ResultTable",
    "Rule",
    "RuleSet",
    "SchemaDef",
    "SchemaViolation",
    "SchemaViolationError",
    "SelectQuery",
    "StaleOverlay",
    "StoreFrozen",
    "TeamProfile",
    "Term",
    "TermKind",
    "TraceNode",
    "Triple",
    "TriplePattern",
    "TripleStore",
    "UnboundVariable",
    "UnknownConcern",
    "UnknownPrefix",
    "UnsafeRule",
    "bind_query",
    "content_hash",
    "evaluate",
    "explain",
    "iri",
    "literal",
    "load_knowledge_base",
    "make_team_variant",
    "parse_concerns",
    "parse_query",
    "parse_rules",
    "parse_turtle",
    "run_query",
    "saturate",
    "serialize_turtle",
    "validate",
    "variable",
    "__version__",
]
