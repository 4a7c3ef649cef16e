"""Command-line entry point: validate, query, concern, recommend, serve.

Exit codes are a stable contract: 0 success, 1 domain error (schema
violations, bad queries, invalid profiles), 2 usage or IO error.  Every
command produces byte-identical standard output for identical inputs;
the recommend command therefore renders the minted team individual under
the stable label "Team" instead of its per-run IRI.
"""

from __future__ import annotations

import csv
import io
import logging
import sys
from pathlib import Path
from typing import Optional

import click

from .cache import default_cache_dir
from .errors import KbError, SchemaViolationError
from .jsonio import compact
from .kb import KnowledgeBase, TeamProfile, load_knowledge_base
from .rdf import Term
from .sparql import ResultTable

_PATH = click.Path(exists=False, dir_okay=False, path_type=Path)


def kb_options(command):
    """File-path options shared by every command, with env overrides."""
    options = [
        click.option("--ontology", type=_PATH, default=None, envvar="AGILEKB_ONTOLOGY",
                     help="Ontology document (defaults to the bundled seed)."),
        click.option("--schema", type=_PATH, default=None, envvar="AGILEKB_SCHEMA",
                     help="Schema document."),
        click.option("--rules", type=_PATH, default=None, envvar="AGILEKB_RULES",
                     help="Inference rule file."),
        click.option("--concerns", type=_PATH, default=None, envvar="AGILEKB_CONCERNS",
                     help="Concern registry file."),
        click.option("--goals", type=_PATH, default=None, envvar="AGILEKB_GOALS",
                     help="Goal catalog document."),
        click.option("--factors", type=_PATH, default=None, envvar="AGILEKB_FACTORS",
                     help="Situational factor catalog document."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _load(ontology, schema, rules, concerns, goals, factors, cache_dir=None) -> KnowledgeBase:
    return load_knowledge_base(
        ontology_path=ontology,
        rules_path=rules,
        concerns_path=concerns,
        schema_path=schema,
        goals_path=goals,
        factors_path=factors,
        cache_dir=cache_dir,
    )


def _fail(message: str, code: int) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _guard(exc: Exception) -> None:
    """Map an error to the exit-code contract."""
    if isinstance(exc, SchemaViolationError):
        for line in exc.violations:
            click.echo(line, err=True)
        sys.exit(1)
    if isinstance(exc, KbError):
        _fail(str(exc), 1)
    if isinstance(exc, OSError):
        _fail(str(exc), 2)
    raise exc


def _label(term: Term, team_iri: Optional[str] = None) -> str:
    if term.is_iri:
        if team_iri is not None and term.text == team_iri:
            return "Team"
        return term.local_name
    return term.text


def _print_table(kb: KnowledgeBase, table: ResultTable, output_format: str) -> None:
    if output_format == "json":
        click.echo(compact(kb.render_table(table)))
        return
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([cell.text for cell in row])
        click.echo(buffer.getvalue(), nl=False)
        return
    headers = [f"?{name}" for name in table.columns]
    rendered = [[_label(cell) for cell in row] for row in table.rows]
    widths = [
        max([len(headers[i])] + [len(row[i]) for row in rendered])
        for i in range(len(headers))
    ]
    click.echo("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for row in rendered:
        click.echo("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


format_option = click.option(
    "--format", "output_format", type=click.Choice(["text", "csv", "json"]),
    default="text", envvar="AGILEKB_FORMAT", help="Output format.",
)


@click.group()
@click.version_option(package_name="agilekb", prog_name="agilekb")
def main() -> None:
    """Knowledge-base engine for agile practice adoption."""


@main.command()
@kb_options
def validate(ontology, schema, rules, concerns, goals, factors) -> None:
    """Load and validate all inputs; exit 0 when clean."""
    try:
        kb = _load(ontology, schema, rules, concerns, goals, factors)
    except Exception as exc:
        _guard(exc)
        return
    click.echo(
        f"ok: {len(kb.store)} statements, {len(kb.ruleset)} rules, "
        f"{len(kb.registry)} concerns, hash {kb.ontology_hash[:12]}"
    )


@main.command()
@kb_options
@format_option
@click.argument("query_text", metavar="QUERY")
def query(ontology, schema, rules, concerns, goals, factors, output_format, query_text) -> None:
    """Run a SELECT query (inline text, or a path to a query file)."""
    candidate = Path(query_text)
    try:
        if candidate.exists() and candidate.is_file():
            query_text = candidate.read_text(encoding="utf-8")
        kb = _load(ontology, schema, rules, concerns, goals, factors)
        table = kb.query(query_text)
    except Exception as exc:
        _guard(exc)
        return
    _print_table(kb, table, output_format)


@main.command()
@kb_options
@format_option
@click.option("--practice", default=None, envvar="AGILEKB_PRACTICE",
              help="Practice IRI or local name for parameterized concerns.")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              envvar="AGILEKB_CACHE_DIR", help="Persist concern results under this directory.")
@click.argument("concern_id")
def concern(ontology, schema, rules, concerns, goals, factors, output_format,
            practice, cache_dir, concern_id) -> None:
    """Answer a registered concern, using the persistent cache if given."""
    try:
        kb = _load(ontology, schema, rules, concerns, goals, factors, cache_dir=cache_dir)
        resolved = kb.resolve_ref(practice) if practice is not None else None
        table = kb.answer_concern(concern_id, resolved)
    except Exception as exc:
        _guard(exc)
        return
    _print_table(kb, table, output_format)


@main.command()
@kb_options
@format_option
@click.option("--goal", "goal_refs", multiple=True, envvar="AGILEKB_GOAL",
              help="Desired goal or principle (IRI, local name, or catalog id); repeatable.")
@click.option("--situation", "situation_specs", multiple=True, envvar="AGILEKB_SITUATION",
              help="Situational factor as factor=value; repeatable.")
def recommend(ontology, schema, rules, concerns, goals, factors, output_format,
              goal_refs, situation_specs) -> None:
    """Recommend practices for a team profile."""
    situations: dict[str, str] = {}
    for spec in situation_specs:
        factor, separator, value = spec.partition("=")
        if not separator or not factor or not value:
            raise click.BadParameter(f"expected factor=value, got {spec!r}", param_hint="--situation")
        situations[factor] = value
    try:
        kb = _load(ontology, schema, rules, concerns, goals, factors)
        report = kb.recommend(TeamProfile(tuple(goal_refs), situations))
    except Exception as exc:
        _guard(exc)
        return

    if output_format == "json":
        stable = kb.namespace + "Team"
        click.echo(compact(kb.render_report(report)).replace(report.team_iri, stable))
        return

    def section(title: str, advice_list) -> None:
        click.echo(f"{title}:")
        if not advice_list:
            click.echo("  (none)")
        for advice in advice_list:
            name = kb.names.get(advice.practice)
            local = advice.practice.rsplit("#", 1)[-1]
            heading = f"{name} ({local})" if name else local
            click.echo(f"  - {heading}")
            for node in advice.traces:
                premises = ", ".join(
                    f"({_label(p.triple.subject, report.team_iri)} "
                    f"{_label(p.triple.predicate)} "
                    f"{_label(p.triple.object, report.team_iri)})"
                    for p in node.premises
                )
                click.echo(f"      via {node.rule} from {premises}")

    section("Recommended practices", report.recommended)
    section("Discouraged practices", report.discouraged)


@main.command()
@kb_options
@click.option("--host", default="127.0.0.1", envvar="AGILEKB_HOST", help="Listen address.")
@click.option("--port", default=8000, type=int, envvar="AGILEKB_PORT", help="Listen port.")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path),
              default=None, envvar="AGILEKB_CACHE_DIR",
              help="Cache directory (defaults to the user cache dir).")
@click.option("--static-dir", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, envvar="AGILEKB_STATIC_DIR",
              help="Directory with built web UI assets to serve at /.")
@click.option("--max-parallel", default=8, type=int, envvar="AGILEKB_MAX_PARALLEL",
              help="Concurrent recommendation limit.")
def serve(ontology, schema, rules, concerns, goals, factors,
          host, port, cache_dir, static_dir, max_parallel) -> None:
    """Start the HTTP API (warms the concern cache first)."""
    import uvicorn

    from .server import create_app

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    log = logging.getLogger("agilekb")
    try:
        kb = _load(ontology, schema, rules, concerns, goals, factors,
                   cache_dir=cache_dir or default_cache_dir())
        warmed = kb.warm_cache()
    except Exception as exc:
        _guard(exc)
        return
    log.info("knowledge base ready: %d statements, %d concerns warmed", len(kb.store), warmed)
    app = create_app(kb, static_dir=static_dir, max_parallel_recommendations=max_parallel)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except OSError as exc:
        _fail(f"cannot listen on {host}:{port}: {exc}", 1)


if __name__ == "__main__":
    main()
