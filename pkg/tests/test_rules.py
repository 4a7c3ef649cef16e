import pytest

from agilekb import (
    NotFound,
    ParseError,
    ResourceLimit,
    RuleSet,
    TripleStore,
    UnsafeRule,
    explain,
    iri,
    literal,
    parse_rules,
    saturate,
)
from agilekb.rdf import Triple

import oracles

NS = "http://x/"


def t(s, p, o):
    obj = o if not isinstance(o, str) else iri(NS + o)
    return Triple(iri(NS + s), iri(NS + p), obj)


def loaded(*facts):
    store = TripleStore()
    for fact in facts:
        store.insert(fact)
    return store


INVERSE_RULES = """
@prefix : <http://x/> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
RULE inv: IF (?p owl:inverseOf ?q) AND (?x ?p ?y) THEN (?y ?q ?x)
"""

CHAIN_RULES = """
@prefix : <http://x/> .
RULE step: IF (?a :next ?b) AND (?b :next ?c) THEN (?a :reaches ?c)
RULE lift: IF (?a :reaches ?b) THEN (?a :next ?b)
"""


def test_parse_rules_shape():
    ruleset = parse_rules(INVERSE_RULES)
    assert len(ruleset) == 1
    (rule,) = ruleset.rules
    assert rule.name == "inv"
    assert len(rule.body) == 2
    assert len(rule.head) == 1
    assert rule.body[0].predicate.text == "http://www.w3.org/2002/07/owl#inverseOf"


def test_parse_rules_accepts_comments_and_blank_lines():
    text = (
        "# leading comment\n"
        "@prefix : <http://x/onto#> .  # note the hash inside the IRI\n"
        "\n"
        "RULE r: IF (?a :p ?b) THEN (?b :q ?a)  # trailing comment\n"
    )
    ruleset = parse_rules(text)
    assert ruleset.rules[0].body[0].predicate.text == "http://x/onto#p"


def test_parse_rules_multi_atom_head():
    text = "@prefix : <http://x/> .\nRULE r: IF (?a :p ?b) THEN (?b :q ?a) AND (?a :r ?a)"
    (rule,) = parse_rules(text).rules
    assert len(rule.head) == 2


def test_parse_rules_full_iri_positions():
    text = "RULE r: IF (?a <http://x/p> ?b) THEN (?a <http://x/q> ?b)"
    (rule,) = parse_rules(text).rules
    assert rule.head[0].predicate.text == "http://x/q"


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("RULE r IF (?a <http://x/p> ?b) THEN (?a <http://x/p> ?b)", "expected RULE"),
        ("RULE r: IF (?a ?b) THEN (?a <http://x/p> ?b)", "exactly 3 positions"),
        ("RULE r: IF (?a :p ?b) THEN (?a :p ?b)", "unknown prefix"),
        ("@prefix : http://x/ .", "malformed @prefix"),
        ("RULE r: IF (?a <http://x/p> ?b) THEN (?a <http://x/p> ?b)\n"
         "RULE r: IF (?a <http://x/p> ?b) THEN (?a <http://x/p> ?b)", "duplicate rule name"),
    ],
)
def test_parse_rule_errors(text, fragment):
    with pytest.raises(ParseError) as caught:
        parse_rules(text)
    assert fragment in str(caught.value)


def test_unsafe_rule_is_rejected():
    with pytest.raises(UnsafeRule) as caught:
        parse_rules("RULE r: IF (?a <http://x/p> ?b) THEN (?a <http://x/p> ?c)")
    assert caught.value.variable == "c"


def test_saturate_returns_only_new_statements():
    store = loaded(
        Triple(iri(NS + "likes"), iri("http://www.w3.org/2002/07/owl#inverseOf"), iri(NS + "likedBy")),
        t("ann", "likes", "bo"),
    )
    added = saturate(store, parse_rules(INVERSE_RULES))
    assert added == {t("bo", "likedBy", "ann")}
    assert saturate(store, parse_rules(INVERSE_RULES)) == set()


def test_saturate_reaches_a_fixpoint_through_mutual_rules():
    store = loaded(t("a", "next", "b"), t("b", "next", "c"), t("c", "next", "d"))
    saturate(store, parse_rules(CHAIN_RULES))
    assert set(store.statements) == oracles.naive_fixpoint(store.statements, parse_rules(CHAIN_RULES).rules)
    assert t("a", "reaches", "d") in store


def test_head_instantiations_that_are_not_statements_are_skipped():
    # ?v binds a literal, which cannot serve as a subject.
    text = "@prefix : <http://x/> .\nRULE r: IF (?s :p ?v) THEN (?v :q ?s)"
    store = loaded(t("a", "p", literal("five")), t("a", "p", "b"))
    added = saturate(store, parse_rules(text))
    assert added == {t("b", "q", "a")}


def test_derivation_cap():
    store = loaded(t("a", "next", "b"), t("b", "next", "c"), t("c", "next", "d"))
    with pytest.raises(ResourceLimit):
        saturate(store, parse_rules(CHAIN_RULES), cap=1)


def test_initial_delta_resumes_over_a_closed_base():
    base = loaded(t("a", "next", "b"), t("b", "next", "c"))
    ruleset = parse_rules(CHAIN_RULES)
    saturate(base, ruleset)
    base.freeze()

    overlay = base.overlay()
    new = t("c", "next", "e")
    overlay.insert(new)
    saturate(overlay, ruleset, initial_delta=[new])

    merged = loaded(t("a", "next", "b"), t("b", "next", "c"), new)
    saturate(merged, ruleset)
    assert set(overlay.statements) == set(merged.statements)
    assert t("b", "reaches", "e") in overlay


def test_explain_requires_presence():
    store = loaded(t("a", "next", "b"))
    ruleset = parse_rules(CHAIN_RULES)
    saturate(store, ruleset)
    with pytest.raises(NotFound):
        explain(store, ruleset, t("zz", "next", "zz"))


def test_explain_returns_empty_for_asserted_statements():
    store = loaded(t("a", "next", "b"), t("b", "next", "c"))
    ruleset = parse_rules(CHAIN_RULES)
    saturate(store, ruleset)
    assert explain(store, ruleset, t("a", "next", "b")) == []


def test_explain_reports_rule_and_premises():
    store = loaded(t("a", "next", "b"), t("b", "next", "c"))
    ruleset = parse_rules(CHAIN_RULES)
    saturate(store, ruleset)
    traces = explain(store, ruleset, t("a", "reaches", "c"))
    assert traces, "derived statements must carry at least one trace"
    first = traces[0]
    assert first.rule_name == "step"
    assert first.premises == (t("a", "next", "b"), t("b", "next", "c"))
    assert first.conclusion == t("a", "reaches", "c")


def test_explain_collects_alternative_derivations():
    text = (
        "@prefix : <http://x/> .\n"
        "RULE one: IF (?a :p ?b) THEN (?a :out ?b)\n"
        "RULE two: IF (?a :q ?b) THEN (?a :out ?b)\n"
    )
    store = loaded(t("a", "p", "b"), t("a", "q", "b"))
    ruleset = parse_rules(text)
    saturate(store, ruleset)
    traces = explain(store, ruleset, t("a", "out", "b"))
    assert {trace.rule_name for trace in traces} == {"one", "two"}


def test_first_trace_is_well_founded():
    """Walking first traces only ever descends to statements derived
    strictly earlier, so the recursion always bottoms out in asserted facts."""
    store = loaded(t("a", "next", "b"), t("b", "next", "c"), t("c", "next", "d"))
    ruleset = parse_rules(CHAIN_RULES)
    saturate(store, ruleset)
    asserted = {t("a", "next", "b"), t("b", "next", "c"), t("c", "next", "d")}

    def walk(statement, depth=0):
        assert depth < 100, "trace recursion must terminate"
        traces = explain(store, ruleset, statement)
        if not traces:
            assert statement in asserted
            return
        for premise in traces[0].premises:
            walk(premise, depth + 1)

    for statement in store.statements:
        walk(statement)


def test_saturation_state_is_per_store():
    ruleset = parse_rules(CHAIN_RULES)
    first = loaded(t("a", "next", "b"), t("b", "next", "c"))
    second = loaded(t("x", "next", "y"), t("y", "next", "z"))
    saturate(first, ruleset)
    saturate(second, ruleset)
    assert explain(second, ruleset, t("x", "reaches", "z"))
    with pytest.raises(NotFound):
        explain(first, ruleset, t("x", "reaches", "z"))


def test_ruleset_iteration_and_len():
    ruleset = parse_rules(CHAIN_RULES)
    assert isinstance(ruleset, RuleSet)
    assert [rule.name for rule in ruleset] == ["step", "lift"]
    assert len(ruleset) == 2
