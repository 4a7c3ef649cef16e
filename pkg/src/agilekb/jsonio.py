"""JSON encodings shared by the result cache, the HTTP API, and the CLI.

Terms are serialized structurally ({kind, text, datatype?}) rather than as
raw strings so clients can render IRIs as labels without re-parsing.  The
compact rendering pins separators and keeps non-ASCII text unescaped,
which makes equal payloads byte-identical wherever they are produced.
"""

from __future__ import annotations

import json
from typing import Any

from .rdf import Term, TermKind, Triple, intern_term
from .sparql import ResultTable


def compact(payload: Any) -> str:
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False)


def term_to_json(term: Term) -> dict:
    out: dict = {"kind": term.kind.value, "text": term.text}
    if term.datatype is not None:
        out["datatype"] = term.datatype
    return out


def term_from_json(obj: dict) -> Term:
    return intern_term(TermKind(obj["kind"]), obj["text"], obj.get("datatype"))


def triple_to_json(triple: Triple) -> dict:
    return {
        "subject": term_to_json(triple.subject),
        "predicate": term_to_json(triple.predicate),
        "object": term_to_json(triple.object),
    }


def table_to_json(table: ResultTable) -> dict:
    return {
        "columns": list(table.columns),
        "rows": [[term_to_json(term) for term in row] for row in table.rows],
    }


def table_from_json(obj: dict) -> ResultTable:
    return ResultTable(
        tuple(obj["columns"]),
        tuple(tuple(term_from_json(cell) for cell in row) for row in obj["rows"]),
    )
