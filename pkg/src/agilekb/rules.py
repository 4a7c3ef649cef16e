"""Horn-style inference rules and forward-chaining saturation.

Rules are ``IF body-atoms THEN head-atoms`` implications over triple
patterns.  ``saturate`` drives a store to its least fixpoint with a
semi-naive strategy: after the first round, a rule only re-fires when at
least one body atom matches a statement derived in the previous round.
Every derivation is recorded so ``explain`` can hand back provenance
traces for derived statements.
"""

from __future__ import annotations

import re
import threading
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import NotFound, ParseError, ResourceLimit, UnknownPrefix, UnsafeRule
from .patterns import Binding, substitute, unify
from .rdf import AnyStore, Term, TermKind, Triple, TriplePattern, intern_term

DEFAULT_DERIVATION_CAP = 1_000_000


@dataclass(frozen=True)
class Rule:
    name: str
    body: tuple[TriplePattern, ...]
    head: tuple[TriplePattern, ...]


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...] = ()

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


@dataclass(frozen=True)
class DerivationTrace:
    """How one statement was concluded: the rule plus the matched premises."""

    conclusion: Triple
    rule_name: str
    premises: tuple[Triple, ...]


_RULE_RE = re.compile(
    r"RULE\s+(?P<name>[A-Za-z0-9_-]+)\s*:\s*IF\s+(?P<body>.+?)\s+THEN\s+(?P<head>.+)$",
    re.IGNORECASE,
)
_ATOM_SPLIT_RE = re.compile(r"\)\s+AND\s+\(", re.IGNORECASE)
_PREFIX_RE = re.compile(r"@prefix\s+(?P<label>[A-Za-z][A-Za-z0-9_-]*|)\s*:\s*<(?P<ns>[^>\s]+)>\s*\.?\s*$")


def _parse_position(token: str, prefixes: dict[str, str], line_no: int) -> Term:
    if token.startswith("?"):
        name = token[1:]
        if not name or not re.match(r"[A-Za-z_][A-Za-z0-9_]*$", name):
            raise ParseError(f"malformed variable {token!r}", line_no)
        return intern_term(TermKind.VARIABLE, name)
    if token.startswith("<") and token.endswith(">"):
        return intern_term(TermKind.IRI, token[1:-1])
    if ":" in token:
        label, local = token.split(":", 1)
        if label not in prefixes:
            raise UnknownPrefix(label, line_no)
        return intern_term(TermKind.IRI, prefixes[label] + local)
    raise ParseError(f"expected IRI, prefixed name, or ?variable, got {token!r}", line_no)


def _parse_atoms(section: str, prefixes: dict[str, str], line_no: int) -> tuple[TriplePattern, ...]:
    section = section.strip()
    if not (section.startswith("(") and section.endswith(")")):
        raise ParseError("atoms must be parenthesized (s p o) groups", line_no)
    atoms = []
    for chunk in _ATOM_SPLIT_RE.split(section[1:-1]):
        parts = chunk.split()
        if len(parts) != 3:
            raise ParseError(f"atom needs exactly 3 positions, got {chunk.strip()!r}", line_no)
        s, p, o = (_parse_position(part, prefixes, line_no) for part in parts)
        atoms.append(TriplePattern(s, p, o))
    return tuple(atoms)


def _strip_comment(raw: str) -> str:
    # A # inside <...> is part of the IRI, not a comment.
    in_iri = False
    for i, ch in enumerate(raw):
        if ch == "<":
            in_iri = True
        elif ch == ">":
            in_iri = False
        elif ch == "#" and not in_iri:
            return raw[:i]
    return raw


def parse_rules(text: str) -> RuleSet:
    """Parse a rule file: a leading @prefix block, then one RULE per line."""
    prefixes: dict[str, str] = {}
    rules: list[Rule] = []
    seen: dict[str, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.lower().startswith("@prefix"):
            m = _PREFIX_RE.match(line)
            if not m:
                raise ParseError("malformed @prefix directive", line_no)
            prefixes[m.group("label")] = m.group("ns")
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise ParseError("expected RULE <name>: IF (...) THEN (...)", line_no)
        name = m.group("name")
        if name in seen:
            raise ParseError(f"duplicate rule name {name!r} (first at line {seen[name]})", line_no)
        seen[name] = line_no
        body = _parse_atoms(m.group("body"), prefixes, line_no)
        head = _parse_atoms(m.group("head"), prefixes, line_no)
        body_vars = {v for atom in body for v in atom.variables()}
        for atom in head:
            for v in sorted(atom.variables() - body_vars):
                raise UnsafeRule(v, line_no)
        rules.append(Rule(name, body, head))
    return RuleSet(tuple(rules))


class _SaturationState:
    """Per-store derivation bookkeeping, accumulated across saturate calls."""

    def __init__(self):
        self.asserted: set[Triple] = set()
        self.traces: dict[Triple, list[tuple[str, tuple[Triple, ...]]]] = {}
        self.trace_keys: set[tuple[Triple, str, tuple[Triple, ...]]] = set()


_states: "weakref.WeakKeyDictionary[object, _SaturationState]" = weakref.WeakKeyDictionary()
_states_lock = threading.Lock()


def _state_for(store: AnyStore, create: bool) -> Optional[_SaturationState]:
    with _states_lock:
        state = _states.get(store)
        if state is None and create:
            state = _SaturationState()
            _states[store] = state
        return state


def _instantiate_head(atom: TriplePattern, binding: Binding) -> Optional[Triple]:
    ground = substitute(atom, binding)
    s, p, o = ground.subject, ground.predicate, ground.object
    # A body match can bind a head subject/predicate to a literal; such
    # instantiations are not statements and are skipped.
    if not s.is_iri or not p.is_iri or o.is_variable:
        return None
    return Triple(s, p, o)


def _fire(
    store: AnyStore,
    rule: Rule,
    delta_index: Optional[set[Triple]],
) -> Iterable[tuple[Triple, tuple[Triple, ...]]]:
    """Yield (conclusion, premises) for each match of the rule body.

    When ``delta_index`` is given, only matches whose premises include at
    least one delta statement are produced (the semi-naive restriction):
    each body position takes a turn as the delta atom.
    """
    positions = range(len(rule.body)) if delta_index is not None else (None,)
    for delta_pos in positions:
        partials: list[tuple[Binding, tuple[Triple, ...]]] = [({}, ())]
        dead = False
        for i, atom in enumerate(rule.body):
            nexts: list[tuple[Binding, tuple[Triple, ...]]] = []
            for binding, premises in partials:
                ground = substitute(atom, binding)
                if delta_pos is not None and i == delta_pos:
                    candidates = [t for t in store.match(ground) if t in delta_index]
                else:
                    candidates = store.match(ground)
                for statement in candidates:
                    extended = unify(ground, statement, binding)
                    if extended is not None:
                        nexts.append((extended, premises + (statement,)))
            partials = nexts
            if not partials:
                dead = True
                break
        if dead:
            continue
        for binding, premises in partials:
            for head_atom in rule.head:
                conclusion = _instantiate_head(head_atom, binding)
                if conclusion is not None:
                    yield conclusion, premises


def saturate(
    store: AnyStore,
    rules: RuleSet,
    cap: int = DEFAULT_DERIVATION_CAP,
    initial_delta: Optional[Iterable[Triple]] = None,
) -> set[Triple]:
    """Close the store under the rules; return only the newly added statements.

    Evaluation is semi-naive: round one considers every statement, later
    rounds only join against the previous round's additions.  Pass
    ``initial_delta`` to resume over a store whose remainder is already
    known to be closed (e.g. an overlay over a saturated base).

    Raises ResourceLimit once more than ``cap`` statements were derived.
    """
    state = _state_for(store, create=True)
    before = set(store.statements)
    state.asserted.update(before - set(state.traces))

    derived: set[Triple] = set()
    delta: Optional[set[Triple]] = None if initial_delta is None else set(initial_delta)

    while True:
        new_round: set[Triple] = set()
        for rule in rules:
            for conclusion, premises in _fire(store, rule, delta):
                if conclusion in state.asserted:
                    continue
                key = (conclusion, rule.name, premises)
                if key not in state.trace_keys and conclusion not in before:
                    state.trace_keys.add(key)
                    state.traces.setdefault(conclusion, []).append((rule.name, premises))
                if conclusion not in store:
                    new_round.add(conclusion)
        if not new_round:
            break
        for t in sorted(new_round, key=Triple.sort_key):
            store.insert(t)
        derived |= new_round
        if len(derived) > cap:
            raise ResourceLimit(
                f"saturation derived more than {cap} statements; runaway ruleset?"
            )
        delta = new_round
    return derived


def explain(store: AnyStore, rules: RuleSet, statement: Triple) -> list[DerivationTrace]:
    """Derivation traces for a statement; empty for asserted statements.

    Requires that ``saturate`` already ran on this store.  Traces come back
    in derivation order, so the first one never depends on statements
    derived later (its premises recursively bottom out in asserted facts).
    """
    if statement not in store:
        raise NotFound(f"statement not in store: {statement!r}")
    state = _state_for(store, create=False)
    if state is None:
        return []
    return [
        DerivationTrace(statement, rule_name, premises)
        for rule_name, premises in state.traces.get(statement, [])
    ]
