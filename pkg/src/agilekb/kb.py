"""Knowledge-base facade: loading, concerns, caching, and recommendations.

Loading builds one read-only store from the schema, the goal and factor
catalogs, and the ontology document, saturates it with the shipped rules,
and validates every asserted statement against the schema.  Two retrieval
pipelines sit on top:

- Concern answering evaluates registered queries against the base store
  and keeps the tables in a hash-keyed persistent cache.
- Recommendation works on a throwaway overlay: it mints a fresh team
  individual, asserts the profile as triples, saturates the overlay, and
  reads off the recommendedFor/discouragedFor edges with their
  derivation traces.  The base store is never touched.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .cache import ResultCache
from .catalog import Catalog, build_catalog
from .concerns import Concern, ConcernRegistry, bind_query, make_team_variant, parse_concerns
from .errors import InvalidProfile, KbError, ParseError, SchemaViolationError
from .jsonio import table_to_json, triple_to_json
from .rdf import RDF_TYPE, RDF_TYPE_IRI, AnyStore, Term, Triple, TriplePattern, TripleStore, iri, variable
from .rules import RuleSet, explain, parse_rules, saturate
from .schema import OWL_NS, RDFS_NS, SchemaDef, build_schema, validate
from .sparql import ResultTable, evaluate, parse_query
from .turtle_io import content_hash, parse_turtle

DEFAULT_NAMESPACE = "http://obama.kb/onto#"
RDF_NS = RDF_TYPE_IRI[: -len("type")]
DATA_DIR = Path(__file__).parent / "data"

DEFAULT_ONTOLOGY = DATA_DIR / "seed.ttl"
DEFAULT_SCHEMA = DATA_DIR / "schema.ttl"
DEFAULT_GOALS = DATA_DIR / "goals.ttl"
DEFAULT_FACTORS = DATA_DIR / "factors.ttl"
DEFAULT_RULES = DATA_DIR / "rules" / "default.rules"
DEFAULT_CONCERNS = DATA_DIR / "concerns.cfg"


@dataclass(frozen=True)
class TeamProfile:
    """What a team wants (goals) and what it is like (situations).

    ``situations`` maps a factor reference to the chosen value reference;
    references may be full IRIs, local names, or kebab-case catalog ids.
    """

    goals: tuple[str, ...] = ()
    situations: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class TraceNode:
    """A derivation rendered as a tree; rule None marks an asserted leaf."""

    triple: Triple
    rule: Optional[str]
    premises: tuple["TraceNode", ...] = ()


@dataclass(frozen=True)
class PracticeAdvice:
    practice: str
    traces: tuple[TraceNode, ...]


@dataclass(frozen=True)
class RecommendationReport:
    team_iri: str
    recommended: tuple[PracticeAdvice, ...]
    discouraged: tuple[PracticeAdvice, ...]
    concern_results: dict[str, ResultTable]


def trace_to_json(node: TraceNode) -> dict:
    out: dict = {"triple": triple_to_json(node.triple)}
    if node.rule is not None:
        out["rule"] = node.rule
        out["premises"] = [trace_to_json(p) for p in node.premises]
    return out


class KnowledgeBase:
    """A loaded, saturated, schema-valid knowledge base (read-only)."""

    def __init__(
        self,
        store: TripleStore,
        schema: SchemaDef,
        ruleset: RuleSet,
        registry: ConcernRegistry,
        catalog: Catalog,
        namespace: str,
        ontology_hash: str,
        cache: ResultCache,
    ):
        self.store = store
        self.schema = schema
        self.ruleset = ruleset
        self.registry = registry
        self.catalog = catalog
        self.namespace = namespace
        self.ontology_hash = ontology_hash
        self.cache = cache
        self.prefixes = {"": namespace, "rdf": RDF_NS, "rdfs": RDFS_NS, "owl": OWL_NS}
        self.team_concerns: tuple[Concern, ...] = tuple(
            c for c in registry if c.team_scoped
        ) + tuple(
            make_team_variant(c, namespace)
            for c in registry
            if c.requires_practice and not c.team_scoped
        )
        self.names = self._collect_names()
        self._lock = threading.Lock()
        self.evaluations = 0

    def _collect_names(self) -> dict[str, str]:
        pattern = TriplePattern(variable("s"), iri(self.namespace + "name"), variable("n"))
        names: dict[str, str] = {}
        for statement in self.store.match(pattern):
            if statement.object.is_literal:
                names[statement.subject.text] = statement.object.text
        return names

    def _count_evaluation(self) -> None:
        with self._lock:
            self.evaluations += 1

    # ---- scenario 1: concern answering with a persistent cache ----

    def list_concerns(self) -> tuple[Concern, ...]:
        return self.registry.concerns

    def answer_concern(self, concern_id: str, practice: Optional[str] = None) -> ResultTable:
        """Answer a registered concern, from cache whenever it is fresh."""
        concern = self.registry.get(concern_id)
        text = bind_query(concern.query, practice=practice)
        key = concern_id if practice is None else f"{concern_id}|{practice}"
        cached = self.cache.lookup(key)
        if cached is not None:
            return cached
        table = self._evaluate(text, self.store)
        self.cache.put(key, table)
        return table

    def warm_cache(self) -> int:
        """Evaluate and cache every parameter-free concern; returns how many."""
        count = 0
        for concern in self.registry:
            if concern.team_scoped or concern.requires_practice:
                continue
            try:
                self.answer_concern(concern.id)
            except KbError as exc:
                raise KbError(f"warming concern {concern.id!r} failed: {exc}") from exc
            count += 1
        return count

    def stats(self) -> dict:
        return {
            "evaluations": self.evaluations,
            "cache_hits": self.cache.hits,
            "cache_misses": self.cache.misses,
            "cache_entries": len(self.cache),
        }

    def _evaluate(self, text: str, store: AnyStore) -> ResultTable:
        ast = parse_query(text, self.prefixes)
        self._count_evaluation()
        return evaluate(store, ast)

    def query(self, text: str) -> ResultTable:
        """Run ad-hoc query text against the saturated base store."""
        return self._evaluate(text, self.store)

    def resolve_ref(self, ref: str) -> str:
        """Expand a bare local name against the default namespace."""
        return ref if "://" in ref else self.namespace + ref

    # ---- scenario 2: team-profile recommendation on an overlay ----

    def resolve_profile(self, profile: TeamProfile) -> tuple[list[str], list[str]]:
        """Normalize profile references to IRIs; all bad items are reported."""
        problems: list[str] = []
        goal_iris: list[str] = []
        for ref in profile.goals:
            entry = self.catalog.find_goal(ref)
            if entry is None:
                problems.append(f"unknown goal {ref!r}")
            elif entry.iri not in goal_iris:
                goal_iris.append(entry.iri)
        value_iris: list[str] = []
        for factor_ref in profile.situations:
            value_ref = profile.situations[factor_ref]
            factor = self.catalog.find_factor(factor_ref)
            if factor is None:
                problems.append(f"unknown situational factor {factor_ref!r}")
                continue
            value = factor.find_value(value_ref)
            if value is None:
                problems.append(f"unknown value {value_ref!r} for factor {factor.id!r}")
            elif value.iri not in value_iris:
                value_iris.append(value.iri)
        if problems:
            raise InvalidProfile(problems)
        return goal_iris, value_iris

    def recommend(self, profile: TeamProfile) -> RecommendationReport:
        """Run the input-driven pipeline; the base store is never modified."""
        goal_iris, value_iris = self.resolve_profile(profile)
        overlay = self.store.overlay()
        team = iri(f"{self.namespace}Team_{uuid.uuid4().hex}")
        added = [Triple(team, RDF_TYPE, iri(self.namespace + "Team"))]
        desires = iri(self.namespace + "desiresGoal")
        has_situation = iri(self.namespace + "hasSituation")
        added.extend(Triple(team, desires, iri(g)) for g in goal_iris)
        added.extend(Triple(team, has_situation, iri(v)) for v in value_iris)
        for statement in added:
            overlay.insert(statement)
        saturate(overlay, self.ruleset, initial_delta=added)

        memo: dict[Triple, TraceNode] = {}
        recommended = self._advice(overlay, "recommendedFor", team, memo)
        discouraged = self._advice(overlay, "discouragedFor", team, memo)
        results: dict[str, ResultTable] = {}
        for concern in self.team_concerns:
            text = bind_query(concern.query, team=team.text)
            results[concern.id] = self._evaluate(text, overlay)
        return RecommendationReport(team.text, recommended, discouraged, results)

    def _advice(
        self,
        overlay: AnyStore,
        predicate_local: str,
        team: Term,
        memo: dict[Triple, TraceNode],
    ) -> tuple[PracticeAdvice, ...]:
        pattern = TriplePattern(variable("p"), iri(self.namespace + predicate_local), team)
        advice: list[PracticeAdvice] = []
        for statement in overlay.match(pattern):
            nodes = tuple(
                TraceNode(
                    statement,
                    trace.rule_name,
                    tuple(self._trace_tree(overlay, p, memo) for p in trace.premises),
                )
                for trace in explain(overlay, self.ruleset, statement)
            )
            advice.append(PracticeAdvice(statement.subject.text, nodes))
        return tuple(advice)

    def _trace_tree(self, store: AnyStore, statement: Triple, memo: dict[Triple, TraceNode]) -> TraceNode:
        if statement in memo:
            return memo[statement]
        traces = explain(store, self.ruleset, statement)
        if not traces:
            node = TraceNode(statement, None, ())
        else:
            first = traces[0]
            node = TraceNode(
                statement,
                first.rule_name,
                tuple(self._trace_tree(store, p, memo) for p in first.premises),
            )
        memo[statement] = node
        return node

    # ---- JSON rendering shared by the HTTP API and the CLI ----

    def render_table(self, table: ResultTable) -> dict:
        payload = table_to_json(table)
        names: dict[str, str] = {}
        for row in table.rows:
            for term in row:
                if term.is_iri and term.text in self.names:
                    names[term.text] = self.names[term.text]
        payload["names"] = {key: names[key] for key in sorted(names)}
        return payload

    def render_report(self, report: RecommendationReport) -> dict:
        def advice_json(advice: PracticeAdvice) -> dict:
            return {
                "practice": advice.practice,
                "name": self.names.get(advice.practice),
                "traces": [trace_to_json(node) for node in advice.traces],
            }

        return {
            "teamIri": report.team_iri,
            "recommended": [advice_json(a) for a in report.recommended],
            "discouraged": [advice_json(a) for a in report.discouraged],
            "concernResults": {
                cid: self.render_table(table)
                for cid, table in report.concern_results.items()
            },
        }


def _parse_file(path: Path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_turtle(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.message}", exc.line, exc.column) from exc


def load_knowledge_base(
    ontology_path: Optional[Path] = None,
    rules_path: Optional[Path] = None,
    concerns_path: Optional[Path] = None,
    schema_path: Optional[Path] = None,
    goals_path: Optional[Path] = None,
    factors_path: Optional[Path] = None,
    cache_dir: Optional[Path] = None,
    namespace: str = DEFAULT_NAMESPACE,
) -> KnowledgeBase:
    """Load, saturate, and validate a knowledge base.

    Every path defaults to the bundled data files, so a bare call loads
    the demo knowledge graph.  ``cache_dir`` of None keeps the concern
    cache memory-only.
    """
    ontology = _parse_file(ontology_path or DEFAULT_ONTOLOGY)
    schema_doc = _parse_file(schema_path or DEFAULT_SCHEMA)
    goals_doc = _parse_file(goals_path or DEFAULT_GOALS)
    factors_doc = _parse_file(factors_path or DEFAULT_FACTORS)

    rules_file = Path(rules_path or DEFAULT_RULES)
    try:
        ruleset = parse_rules(rules_file.read_text(encoding="utf-8"))
    except ParseError as exc:
        raise ParseError(f"{rules_file}: {exc.message}", exc.line, exc.column) from exc

    concerns_file = Path(concerns_path or DEFAULT_CONCERNS)
    try:
        registry = parse_concerns(concerns_file.read_text(encoding="utf-8"))
    except ParseError as exc:
        raise ParseError(f"{concerns_file}: {exc.message}", exc.line, exc.column) from exc

    store = TripleStore()
    for doc in (schema_doc, goals_doc, factors_doc, ontology):
        for statement in doc.triples:
            store.insert(statement)
    asserted = set(store.statements)
    ontology_hash = content_hash(asserted)

    schema = build_schema(asserted)
    saturate(store, ruleset)
    violations = validate(schema, store, asserted)
    if violations:
        raise SchemaViolationError([v.message() for v in violations])
    store.freeze()

    catalog = build_catalog(namespace, goals_doc.triples, factors_doc.triples)
    cache = ResultCache(ontology_hash, cache_dir)
    return KnowledgeBase(
        store=store,
        schema=schema,
        ruleset=ruleset,
        registry=registry,
        catalog=catalog,
        namespace=namespace,
        ontology_hash=ontology_hash,
        cache=cache,
    )
