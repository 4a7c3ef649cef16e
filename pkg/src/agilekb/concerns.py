"""Concern registry: named, reusable queries over the knowledge base.

Concerns live in a line-based registry file:

    [goals-of-practice]
    title = Goals of a practice
    description = Goals and principles a given practice helps achieve.
    team_scoped = false
    query:
      SELECT ?goal
      WHERE { {practice} :achieve ?goal }
    end

A ``{practice}`` placeholder parameterizes the query by practice IRI; a
``{team}`` placeholder marks the concern as team scoped.  Practice
concerns can be recast as team-scoped variants that range over the
practices recommended for a team instead of one fixed practice.
"""

from __future__ import annotations

import re
import textwrap
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from .errors import DuplicateConcern, MissingParameter, ParseError, UnknownConcern

_ID_RE = re.compile(r"[a-z][a-z0-9-]*")
_KEYS = ("title", "description", "team_scoped")
_WHERE_RE = re.compile(r"\bWHERE\s*\{", re.IGNORECASE)
_SELECT_RE = re.compile(r"\bSELECT(?:\s+DISTINCT)?\s+", re.IGNORECASE)
_PRACTICE_VAR_RE = re.compile(r"\?practice\b")


@dataclass(frozen=True)
class Concern:
    id: str
    title: str
    description: str
    team_scoped: bool
    query: str

    @property
    def requires_practice(self) -> bool:
        return "{practice}" in self.query


@dataclass(frozen=True)
class ConcernRegistry:
    concerns: tuple[Concern, ...]

    def __iter__(self) -> Iterator[Concern]:
        return iter(self.concerns)

    def __len__(self) -> int:
        return len(self.concerns)

    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.concerns)

    def get(self, concern_id: str) -> Concern:
        for concern in self.concerns:
            if concern.id == concern_id:
                return concern
        raise UnknownConcern(f"no concern registered under {concern_id!r}")


def _finish(fields: dict) -> Concern:
    line = fields["line"]
    if "title" not in fields:
        raise ParseError(f"concern {fields['id']!r} has no title", line)
    if "query" not in fields:
        raise ParseError(f"concern {fields['id']!r} has no query block", line)
    team_scoped = fields.get("team_scoped", False)
    if team_scoped != ("{team}" in fields["query"]):
        raise ParseError(
            f"concern {fields['id']!r}: team_scoped flag disagrees with {{team}} placeholder use",
            line,
        )
    return Concern(
        id=fields["id"],
        title=fields["title"],
        description=fields.get("description", ""),
        team_scoped=team_scoped,
        query=fields["query"],
    )


def parse_concerns(text: str) -> ConcernRegistry:
    """Parse registry text; sections keep their file order."""
    concerns: list[Concern] = []
    seen: dict[str, int] = {}
    current: Optional[dict] = None
    in_query = False
    query_lines: list[str] = []
    line_no = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if in_query:
            if raw.strip() == "end":
                assert current is not None
                current["query"] = textwrap.dedent("\n".join(query_lines)).strip()
                in_query = False
            else:
                query_lines.append(raw)
            continue
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError("unterminated [section] header", line_no)
            concern_id = line[1:-1].strip()
            if not _ID_RE.fullmatch(concern_id):
                raise ParseError(f"concern id must be kebab-case: {concern_id!r}", line_no)
            if concern_id in seen:
                raise DuplicateConcern(
                    f"concern {concern_id!r} declared twice (lines {seen[concern_id]} and {line_no})"
                )
            seen[concern_id] = line_no
            if current is not None:
                concerns.append(_finish(current))
            current = {"id": concern_id, "line": line_no}
            continue
        if current is None:
            raise ParseError("content before the first [section] header", line_no)
        if line == "query:":
            in_query = True
            query_lines = []
            continue
        if "=" in line:
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _KEYS:
                raise ParseError(f"unknown key {key!r}", line_no)
            if key in current:
                raise ParseError(f"duplicate key {key!r}", line_no)
            if key == "team_scoped":
                if value not in ("true", "false"):
                    raise ParseError("team_scoped must be true or false", line_no)
                current[key] = value == "true"
            else:
                current[key] = value
            continue
        raise ParseError(f"unrecognized line {line!r}", line_no)
    if in_query:
        raise ParseError("unterminated query block", line_no)
    if current is not None:
        concerns.append(_finish(current))
    return ConcernRegistry(tuple(concerns))


def bind_query(query: str, practice: Optional[str] = None, team: Optional[str] = None) -> str:
    """Fill the query placeholders with IRIs.

    A parameter must be given exactly when the query carries the matching
    placeholder; anything else is a MissingParameter error.
    """
    for name, value in (("practice", practice), ("team", team)):
        placeholder = "{" + name + "}"
        if value is not None:
            if placeholder not in query:
                raise MissingParameter(f"this concern takes no {name} parameter")
            query = query.replace(placeholder, f"<{value}>")
        elif placeholder in query:
            raise MissingParameter(f"this concern needs a {name} parameter")
    return query


def make_team_variant(concern: Concern, namespace: str) -> Concern:
    """Recast a practice concern to range over a team's recommended practices.

    The {practice} placeholder becomes a ?practice variable joined against
    ``recommendedFor {team}``, and ?practice is added to an explicit
    projection so the answer rows say which practice they belong to.
    """
    if not concern.requires_practice:
        raise MissingParameter(f"concern {concern.id!r} takes no practice parameter")
    query = concern.query.replace("{practice}", "?practice")
    where = _WHERE_RE.search(query)
    if where is None:
        raise ParseError(f"concern {concern.id!r}: query has no WHERE group", 1)
    inject = f" ?practice <{namespace}recommendedFor> {{team}} ."
    query = query[: where.end()] + inject + query[where.end():]
    select = _SELECT_RE.search(query)
    if select is None:
        raise ParseError(f"concern {concern.id!r}: query has no SELECT clause", 1)
    projection = query[select.end(): where.start()]
    if not projection.lstrip().startswith("*") and not _PRACTICE_VAR_RE.search(projection):
        query = query[: select.end()] + "?practice " + query[select.end():]
    return replace(
        concern,
        id=concern.id + "-for-team",
        title=concern.title + " (recommended practices)",
        team_scoped=True,
        query=query,
    )
