import pytest

from agilekb import (
    DEFAULT_NAMESPACE,
    InvalidProfile,
    MissingParameter,
    ParseError,
    StoreFrozen,
    TeamProfile,
    UnknownConcern,
    load_knowledge_base,
)
from agilekb.kb import trace_to_json

NS = DEFAULT_NAMESPACE


def test_load_defaults(kb):
    assert kb.namespace == NS
    # The bundled rules only fire for team individuals, so base saturation
    # leaves the asserted statements alone.
    assert len(kb.store) == 249
    assert len(kb.ontology_hash) == 64
    with pytest.raises(StoreFrozen):
        kb.store.insert(next(iter(kb.store.statements)))


def test_resolve_ref(kb):
    assert kb.resolve_ref("DailyMeetings") == NS + "DailyMeetings"
    assert kb.resolve_ref("http://other/x") == "http://other/x"


def test_list_concerns(kb):
    ids = [c.id for c in kb.list_concerns()]
    assert ids == [
        "practices-overview",
        "activities-of-practice",
        "goals-of-practice",
        "problems-of-practice",
        "solutions-for-problems",
        "requisites-and-situations",
    ]


def test_team_concern_variants(kb):
    assert [c.id for c in kb.team_concerns] == [
        "goals-of-practice-for-team",
        "problems-of-practice-for-team",
        "solutions-for-problems-for-team",
        "requisites-and-situations-for-team",
    ]


def test_query_uses_default_prefixes(kb):
    table = kb.query("SELECT ?g WHERE { :DailyMeetings :achieve ?g }")
    texts = {row[0].text for row in table.rows}
    assert NS + "Communication_Goal" in texts


def test_answer_concern_caches(fresh_kb):
    before = fresh_kb.evaluations
    first = fresh_kb.answer_concern("practices-overview")
    assert fresh_kb.evaluations == before + 1
    second = fresh_kb.answer_concern("practices-overview")
    assert fresh_kb.evaluations == before + 1, "the second answer must come from cache"
    assert first == second
    assert fresh_kb.stats()["cache_hits"] == 1


def test_answer_concern_with_practice_parameter(fresh_kb):
    table = fresh_kb.answer_concern(
        "solutions-for-problems", practice=NS + "DailyMeetings"
    )
    assert table.columns == ("solution",)
    assert [row[0].text for row in table.rows] == [NS + "Timeboxing"]


def test_practice_parameter_arity(fresh_kb):
    with pytest.raises(MissingParameter, match="needs a practice parameter"):
        fresh_kb.answer_concern("solutions-for-problems")
    with pytest.raises(MissingParameter, match="takes no practice parameter"):
        fresh_kb.answer_concern("practices-overview", practice=NS + "DailyMeetings")


def test_unknown_concern(fresh_kb):
    with pytest.raises(UnknownConcern):
        fresh_kb.answer_concern("made-up")


def test_warm_cache_covers_parameter_free_concerns(fresh_kb):
    assert fresh_kb.warm_cache() == 2
    assert fresh_kb.stats()["cache_entries"] == 2
    evaluations = fresh_kb.evaluations
    fresh_kb.answer_concern("practices-overview")
    fresh_kb.answer_concern("activities-of-practice")
    assert fresh_kb.evaluations == evaluations


def test_stats_shape(fresh_kb):
    assert set(fresh_kb.stats()) == {
        "evaluations",
        "cache_hits",
        "cache_misses",
        "cache_entries",
    }


def test_resolve_profile_accepts_all_reference_styles(kb):
    profile = TeamProfile(
        goals=("communication-goal", NS + "Communication_Goal", "Communication_Goal"),
        situations={"team-size": "small-team"},
    )
    goal_iris, value_iris = kb.resolve_profile(profile)
    assert goal_iris == [NS + "Communication_Goal"], "duplicate references collapse"
    assert value_iris == [NS + "Small_Team"]


def test_resolve_profile_reports_every_problem(kb):
    profile = TeamProfile(
        goals=("made-up-goal",),
        situations={"team-size": "gigantic", "made-up-factor": "x"},
    )
    with pytest.raises(InvalidProfile) as caught:
        kb.resolve_profile(profile)
    details = caught.value.details
    assert "unknown goal 'made-up-goal'" in details
    assert "unknown value 'gigantic' for factor 'team-size'" in details
    assert "unknown situational factor 'made-up-factor'" in details
    assert len(details) == 3


def test_recommend_report_shape(kb):
    report = kb.recommend(
        TeamProfile(
            goals=("communication-goal",),
            situations={"team-distribution": "distributed-team"},
        )
    )
    assert report.team_iri.startswith(NS + "Team_")
    recommended = {a.practice for a in report.recommended}
    discouraged = {a.practice for a in report.discouraged}
    assert NS + "DailyMeetings" in recommended
    assert NS + "DailyMeetings" in discouraged
    assert set(report.concern_results) == {
        "goals-of-practice-for-team",
        "problems-of-practice-for-team",
        "solutions-for-problems-for-team",
        "requisites-and-situations-for-team",
    }


def test_recommend_traces_ground_in_asserted_facts(kb):
    report = kb.recommend(TeamProfile(goals=("communication-goal",)))
    advice = next(a for a in report.recommended if a.practice == NS + "DailyMeetings")
    assert advice.traces, "derived advice must explain itself"
    trace = advice.traces[0]
    assert trace.rule is not None
    leaves = list(trace.premises)
    assert leaves and all(node.rule is None for node in leaves)
    premise_texts = {node.triple.predicate.local_name for node in leaves}
    assert premise_texts == {"desiresGoal", "achieve"}


def test_each_recommend_call_mints_a_fresh_team(kb):
    first = kb.recommend(TeamProfile())
    second = kb.recommend(TeamProfile())
    assert first.team_iri != second.team_iri


def test_empty_profile_yields_no_advice(kb):
    report = kb.recommend(TeamProfile())
    assert report.recommended == ()
    assert report.discouraged == ()
    for table in report.concern_results.values():
        assert table.rows == ()


def test_render_table_includes_display_names(kb):
    table = kb.answer_concern("solutions-for-problems", practice=NS + "DailyMeetings")
    payload = kb.render_table(table)
    assert payload["columns"] == ["solution"]
    assert payload["rows"] == [[{"kind": "IRI", "text": NS + "Timeboxing"}]]
    assert payload["names"] == {NS + "Timeboxing": "Timeboxing"}


def test_render_report_structure(kb):
    report = kb.recommend(TeamProfile(goals=("communication-goal",)))
    payload = kb.render_report(report)
    assert set(payload) == {"teamIri", "recommended", "discouraged", "concernResults"}
    advice = next(
        a for a in payload["recommended"] if a["practice"] == NS + "DailyMeetings"
    )
    assert advice["name"] == "Daily meetings"
    trace = advice["traces"][0]
    assert set(trace) == {"triple", "rule", "premises"}
    for premise in trace["premises"]:
        assert "rule" not in premise, "asserted leaves carry no rule key"


def test_trace_to_json_leaf_shape(kb):
    report = kb.recommend(TeamProfile(goals=("communication-goal",)))
    advice = next(a for a in report.recommended if a.practice == NS + "DailyMeetings")
    leaf = advice.traces[0].premises[0]
    payload = trace_to_json(leaf)
    assert set(payload) == {"triple"}


def test_parse_errors_carry_the_file_path(tmp_path):
    bad = tmp_path / "broken.ttl"
    bad.write_text("@prefix : <http://x/> .\n:s :p .\n", encoding="utf-8")
    with pytest.raises(ParseError) as caught:
        load_knowledge_base(ontology_path=bad)
    assert str(bad) in str(caught.value)


def test_missing_files_surface_as_os_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_knowledge_base(ontology_path=tmp_path / "absent.ttl")
