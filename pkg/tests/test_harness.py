import json
from pathlib import Path

import pytest

from mica.errors import ScriptError
from mica.harness.runner import (conformance_sweep, junit_report,
                                 run_directory, run_scenario, score_trace)
from mica.harness.script import parse_script
from mica.session.trace import TraceRecord

SCENARIOS = Path(__file__).parent.parent / "scenarios"


def trace_bytes(session):
    return "".join(r.to_json() + "\n" for r in session.trace.records)


# -- script parsing --

def test_parse_shipped_script():
    script = parse_script(SCENARIOS / "usage_walkthrough.scenario")
    assert script.recipe_path.name == "pasta.recipe.json"
    kinds = [e.kind for e in script.timeline]
    assert "scene" in kinds and "utterance" in kinds
    assert script.expectations[0].by <= script.expectations[-1].by


def test_unknown_directive_rejected(tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text("recipe: pasta.recipe.json\nfrobnicate everything\n")
    with pytest.raises(ScriptError):
        parse_script(bad)


def test_missing_recipe_rejected(tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text("recipe: not-there.json\nat 1.0 utterance: hello\n")
    with pytest.raises(ScriptError):
        parse_script(bad)


def test_unknown_check_rejected(tmp_path):
    (tmp_path / "pasta.recipe.json").write_bytes(
        (SCENARIOS / "pasta.recipe.json").read_bytes())
    bad = tmp_path / "bad.scenario"
    bad.write_text("recipe: pasta.recipe.json\nexpect by 1.0: vibe good\n")
    with pytest.raises(ScriptError):
        parse_script(bad)


# -- shipped scenarios --

@pytest.mark.parametrize("name", [
    "usage_walkthrough", "skip_suppression", "garlic_memory"])
def test_shipped_scenario_passes(name):
    _, report = run_scenario(SCENARIOS / f"{name}.scenario")
    failures = [c for c in report.checks if not c.passed]
    assert not failures, [f"{c.expectation.label()}: {c.detail}" for c in failures]


@pytest.mark.parametrize("name", [
    "usage_walkthrough", "skip_suppression", "garlic_memory"])
def test_scenario_replay_is_bit_deterministic(name):
    first, _ = run_scenario(SCENARIOS / f"{name}.scenario")
    second, _ = run_scenario(SCENARIOS / f"{name}.scenario")
    assert trace_bytes(first) == trace_bytes(second)
    assert first.store.records() == second.store.records()
    assert json.dumps(first.outbound) == json.dumps(second.outbound)


def test_empty_timeline_yields_startup_only_trace(tmp_path):
    (tmp_path / "pasta.recipe.json").write_bytes(
        (SCENARIOS / "pasta.recipe.json").read_bytes())
    script = tmp_path / "empty.scenario"
    script.write_text("recipe: pasta.recipe.json\n")
    session, report = run_scenario(script)
    assert report.checks == []
    assert session.trace.records == []
    report = score_trace(session.trace.records)
    assert report.total_queries == 0


def test_run_directory_and_junit(tmp_path):
    reports = run_directory(SCENARIOS)
    assert len(reports) == 3
    assert all(r.passed for r in reports)
    xml = junit_report(reports)
    assert xml.count("<testsuite ") == 3
    assert 'failures="0"' in xml


def test_failed_expectation_reports_nearest_trace(tmp_path):
    (tmp_path / "pasta.recipe.json").write_bytes(
        (SCENARIOS / "pasta.recipe.json").read_bytes())
    script = tmp_path / "fail.scenario"
    script.write_text(
        "recipe: pasta.recipe.json\n"
        "at 1.0 utterance: What's my next step?\n"
        "expect by 2.0: state S4\n")
    _, report = run_scenario(script)
    assert not report.passed
    assert "trace" in report.checks[0].detail


# -- score_trace --

def annotated(total, mapped, correct):
    records = []
    for i in range(total):
        records.append(TraceRecord(
            record_id=i + 1, stimulus="utterance", utterance="q",
            classified_event="E2" if i < mapped else "E4",
            from_state="S0", to_state="S2", received_at=float(i),
            completed_at=float(i), ground_truth_event="E2",
            response_correct=i < correct))
    return records


def test_score_trace_matches_first_participant_counts():
    report = score_trace(annotated(10, 9, 8))
    assert report.mapping_accuracy == pytest.approx(0.90)
    assert report.response_accuracy == pytest.approx(0.80)


def test_score_trace_all_correct():
    report = score_trace(annotated(5, 5, 5))
    assert report.mapping_accuracy == pytest.approx(1.0)
    assert report.response_accuracy == pytest.approx(1.0)


def test_score_trace_applies_annotations():
    records = [TraceRecord(
        record_id=1, stimulus="utterance", utterance="q",
        classified_event="E2", from_state="S0", to_state="S2",
        received_at=0.0, completed_at=0.0)]
    report = score_trace(records, {"1": {"ground_truth_event": "E2",
                                         "response_correct": True}})
    assert report.mapping_accuracy == pytest.approx(1.0)


def test_committed_recipe_fixture_matches_construction():
    from mica.knowledge.serialize import dumps_canonical

    from .conftest import make_pasta_knowledge

    committed = (SCENARIOS / "pasta.recipe.json").read_text(encoding="utf-8")
    assert committed == dumps_canonical(make_pasta_knowledge())


# -- conformance sweep --

def test_sweep_covers_every_cell_and_matches_fixture():
    cells = conformance_sweep(SCENARIOS / "pasta.recipe.json")
    assert len(cells) == 70
    bad = [c for c in cells if not c.ok]
    assert bad == [], [(c.state, c.event, c.expected, c.observed) for c in bad]
    rejected = [c for c in cells if c.observed == "Rejected"]
    assert len(rejected) == 2
