"""Catalog of adoption goals and situational factors.

The catalog is derived from bundled triples: goal and principle
individuals come from one document, situational factors from another.  A
factor is a class whose value individuals are typed by it; factors and
values keep their document order so authored orderings (small, medium,
large) survive into the UI.

Catalog entries are addressable three ways: by full IRI, by local name,
and by a kebab-case id derived from the local name (``TeamSize`` and
``Distributed_Team`` become ``team-size`` and ``distributed-team``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import KbError
from .rdf import RDF_TYPE, Triple

_HUMP_RE = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def kebab(local: str) -> str:
    """Kebab-case id for a local name: camel humps and underscores to hyphens."""
    return _HUMP_RE.sub("-", local.replace("_", "-")).lower()


def _local(iri: str) -> str:
    return iri.rsplit("#", 1)[-1].rsplit("/", 1)[-1]


def _matches(ref: str, iri: str) -> bool:
    local = _local(iri)
    return ref in (iri, local, kebab(local))


@dataclass(frozen=True)
class GoalEntry:
    iri: str
    id: str
    name: str
    kind: str  # "goal" or "principle"


@dataclass(frozen=True)
class FactorValue:
    iri: str
    id: str
    name: str


@dataclass(frozen=True)
class Factor:
    iri: str
    id: str
    title: str
    values: tuple[FactorValue, ...]

    def find_value(self, ref: str) -> Optional[FactorValue]:
        for value in self.values:
            if _matches(ref, value.iri):
                return value
        return None


@dataclass(frozen=True)
class Catalog:
    goals: tuple[GoalEntry, ...]
    factors: tuple[Factor, ...]

    def find_goal(self, ref: str) -> Optional[GoalEntry]:
        for goal in self.goals:
            if _matches(ref, goal.iri):
                return goal
        return None

    def find_factor(self, ref: str) -> Optional[Factor]:
        for factor in self.factors:
            if _matches(ref, factor.iri):
                return factor
        return None

    def as_dict(self) -> dict:
        return {
            "goals": [
                {"iri": g.iri, "id": g.id, "name": g.name, "kind": g.kind}
                for g in self.goals
            ],
            "factors": [
                {
                    "iri": f.iri,
                    "id": f.id,
                    "title": f.title,
                    "values": [
                        {"iri": v.iri, "id": v.id, "name": v.name} for v in f.values
                    ],
                }
                for f in self.factors
            ],
        }


def _names(triples: Iterable[Triple], name_iri: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for t in triples:
        if t.predicate.text == name_iri and t.object.is_literal:
            out[t.subject.text] = t.object.text
    return out


def build_catalog(
    namespace: str,
    goal_triples: Iterable[Triple],
    factor_triples: Iterable[Triple],
) -> Catalog:
    """Assemble the catalog; bundled-data gaps raise KbError."""
    name_iri = namespace + "name"
    goal_class = namespace + "Goal"
    principle_class = namespace + "Principle"

    goal_list = list(goal_triples)
    goal_names = _names(goal_list, name_iri)
    goals: list[GoalEntry] = []
    for t in goal_list:
        if t.predicate != RDF_TYPE or t.object.text not in (goal_class, principle_class):
            continue
        iri = t.subject.text
        name = goal_names.get(iri)
        if name is None:
            raise KbError(f"catalog goal {iri} has no name")
        kind = "goal" if t.object.text == goal_class else "principle"
        goals.append(GoalEntry(iri, kebab(t.subject.local_name), name, kind))

    factor_list = list(factor_triples)
    factor_names = _names(factor_list, name_iri)
    class_order: list[str] = []
    members: dict[str, list[str]] = {}
    for t in factor_list:
        if t.predicate != RDF_TYPE or not t.object.is_iri:
            continue
        cls = t.object.text
        if cls not in members:
            class_order.append(cls)
            members[cls] = []
        members[cls].append(t.subject.text)

    factors: list[Factor] = []
    for cls in class_order:
        cls_local = _local(cls)
        title = factor_names.get(cls)
        if title is None:
            raise KbError(f"situational factor {cls} has no name")
        values: list[FactorValue] = []
        for iri in members[cls]:
            name = factor_names.get(iri)
            if name is None:
                raise KbError(f"factor value {iri} has no name")
            values.append(FactorValue(iri, kebab(_local(iri)), name))
        if len(values) < 2:
            raise KbError(f"situational factor {cls} needs at least two values")
        factors.append(Factor(cls, kebab(cls_local), title, tuple(values)))

    return Catalog(tuple(goals), tuple(factors))
