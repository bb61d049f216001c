"""Scenario execution and the transition-coverage sweep.

The runner drives a real session through the production ingress (utterance
calls, scripted scenes sampled by monitor ticks, clock advances); there is
no back door into the state machine. All scene payloads are registered in
the scripted perceiver up front, so each tick sees whatever the kitchen
looked like at that moment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

from ..adapters import ScriptedPerceiver
from ..clock import SimulatedClock
from ..dialogue.events import DialogueState
from ..dialogue.transitions import load_fixture_table
from ..session.config import SessionConfig
from ..session.engine import Session, mock_adapters, start_session
from ..session.metrics import MetricsReport, compute_metrics
from ..session.trace import TraceRecord, apply_annotations
from .script import Expectation, ScenarioScript, parse_script


@dataclass
class CheckResult:
    expectation: Expectation
    passed: bool
    detail: str = ""


@dataclass
class ScenarioReport:
    script_name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _nearest_trace(trace: list[TraceRecord], by: float, n: int = 3) -> str:
    nearby = [r for r in trace if r.completed_at <= by][-n:]
    return " | ".join(
        f"#{r.record_id} {r.stimulus} {r.classified_event} {r.from_state}->{r.to_state}"
        for r in nearby) or "(no trace records yet)"


def _evaluate(exp: Expectation, session: Session) -> CheckResult:
    trace = session.trace.records
    outbound = session.outbound

    def events(kind_value):
        return [r for r in trace
                if r.classified_event == kind_value and r.completed_at <= exp.by]

    def messages(kind, **match):
        found = []
        for m in outbound:
            if m["kind"] != kind or m["t"] > exp.by:
                continue
            if all(m.get(k) == v for k, v in match.items()):
                found.append(m)
        return found

    if exp.check == "event":
        ok = bool(events(exp.argument))
    elif exp.check == "no-event":
        ok = not events(exp.argument)
    elif exp.check == "state":
        # "by" semantics: the state was entered at some point no later than
        # `by`; S0 is always satisfied because sessions start idle.
        ok = (exp.argument == DialogueState.S0_IDLE.value
              or any(r.to_state == exp.argument and r.completed_at <= exp.by for r in trace))
    elif exp.check == "alert":
        ok = bool(messages("alert", event=exp.argument))
    elif exp.check == "no-alert":
        ok = not messages("alert", event=exp.argument)
    elif exp.check == "response-contains":
        needle = exp.argument.lower()
        ok = any(needle in m["text"].lower() for m in messages("response"))
    elif exp.check == "playback-status":
        ok = bool(messages("playback", status=exp.argument))
    else:
        return CheckResult(exp, False, f"unknown check {exp.check!r}")

    detail = "" if ok else f"nearest trace: {_nearest_trace(trace, exp.by)}"
    return CheckResult(exp, ok, detail)


def run_scenario(script: ScenarioScript | str | Path, *,
                 tick_period: float = 2.0, idle_timeout: float = 5.0,
                 alert_cooldown: float = 30.0) -> tuple[Session, ScenarioReport]:
    if not isinstance(script, ScenarioScript):
        script = parse_script(script)

    cfg = SessionConfig(recipe_path=str(script.recipe_path),
                        tick_period=tick_period, idle_timeout=idle_timeout,
                        alert_cooldown=alert_cooldown)
    adapters = mock_adapters()
    perceiver: ScriptedPerceiver = adapters.perceiver
    for entry in script.timeline:
        if entry.kind == "scene":
            perceiver.add(entry.at, entry.payload)

    clock = SimulatedClock()
    session = start_session(cfg, adapters, clock)
    for entry in script.timeline:
        if entry.kind == "scene":
            continue
        gap = entry.at - clock.now()
        if gap > 0:
            session.advance(gap)
        if entry.kind == "utterance":
            session.ingest_utterance(entry.payload)
        elif entry.kind == "skip":
            session.declare_skip(entry.payload)
    remaining = script.end_time() - clock.now()
    if remaining > 0:
        session.advance(remaining)

    report = ScenarioReport(script_name=script.name)
    for exp in script.expectations:
        report.checks.append(_evaluate(exp, session))
    return session, report


def score_trace(trace: list[TraceRecord], annotations: dict | None = None) -> MetricsReport:
    """Metrics over a harness trace, in the engine's own report format."""
    if annotations:
        trace = apply_annotations(trace, annotations)
    return compute_metrics(trace)


# ---------------------------------------------------------------------------
# transition-coverage sweep

_DRIVE_UTTERANCES = {
    DialogueState.S1_FOOD_STATE: ["is the chicken cooked through"],
    DialogueState.S2_STEP_GUIDE: ["what's my next step"],
    DialogueState.S3_PROBLEM_SOLVING: ["i need help with this"],
    DialogueState.S4_GENERAL_VISUAL: ["describe what you can see"],
    DialogueState.S5_CORRECTION_REVIEW: ["is the chicken cooked through", "that's wrong"],
    DialogueState.S6_DETAIL_ELABORATION: ["is the chicken cooked through", "tell me more"],
}

_INJECT_UTTERANCES = {
    "E1": "is the sauce ready",
    "E2": "what's my next step",
    "E3": "i need help with this",
    "E4": "describe what you can see",
    "E7": "tell me more",
    "E8": "that's wrong",
    "E9": "never mind",
    "E10": "pause",
}


@dataclass
class SweepCell:
    state: str
    event: str
    expected: str
    observed: str
    ok: bool


def _fresh_session(recipe_path: str | Path) -> Session:
    cfg = SessionConfig(recipe_path=str(recipe_path))
    return start_session(cfg, mock_adapters(), SimulatedClock())


def _drive_to(session: Session, state: DialogueState) -> None:
    for utterance in _DRIVE_UTTERANCES.get(state, []):
        session.ingest_utterance(utterance)
    assert session.state is state, f"drive failed: wanted {state}, got {session.state}"


def _inject(session: Session, event_code: str) -> TraceRecord:
    """Provoke one event through production ingress and return its trace record."""
    if event_code in _INJECT_UTTERANCES:
        session.ingest_utterance(_INJECT_UTTERANCES[event_code])
    elif event_code == "E5":
        # jump two steps ahead: the step in between stays missing after
        # advancement auto-completes the departed one
        step = session.knowledge.steps[2]
        session.adapters.perceiver.add(session.clock.now() + 0.1, {
            "action": step.summary, "step": step.index,
        })
        session.advance(session.cfg.tick_period)
    elif event_code == "E6":
        # current step observed with an action that matches nothing in it
        step = session.knowledge.steps[session.progress.current_step]
        session.adapters.perceiver.add(session.clock.now() + 0.1, {
            "action": "zzqx unrelated motion", "step": step.index,
        })
        session.advance(session.cfg.tick_period)
    else:
        raise ValueError(f"unknown event code {event_code}")
    assert session.trace.records, "injection produced no trace record"
    return session.trace.records[-1]


def conformance_sweep(recipe_path: str | Path) -> list[SweepCell]:
    """Exercise every reachable (state, event) cell through real ingress.

    One fresh session per cell keeps alert cooldowns and memory from
    leaking between cells. The observed outcome is compared with the
    shipped fixture table.
    """
    table = load_fixture_table()
    cells: list[SweepCell] = []
    for state_code in table["states"]:
        state = DialogueState(state_code)
        for event_code in table["events"]:
            if not table["reachable"][state_code][event_code]:
                continue
            expected = table["cells"][state_code][event_code]
            session = _fresh_session(recipe_path)
            _drive_to(session, state)
            record = _inject(session, event_code)
            if record.classified_event != event_code:
                cells.append(SweepCell(state_code, event_code, expected,
                                       f"misclassified as {record.classified_event}", False))
                continue
            if record.error == "rejected":
                observed = "Rejected"
            else:
                observed = record.to_state
            cells.append(SweepCell(state_code, event_code, expected, observed,
                                   observed == expected))
    return cells


# ---------------------------------------------------------------------------
# directory runs and the junit-style report file


def run_directory(directory: str | Path) -> list[ScenarioReport]:
    scripts = sorted(Path(directory).glob("*.scenario"))
    reports = []
    for path in scripts:
        _, report = run_scenario(parse_script(path))
        reports.append(report)
    return reports


def junit_report(reports: list[ScenarioReport]) -> str:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<testsuites>"]
    for report in reports:
        failures = sum(1 for c in report.checks if not c.passed)
        lines.append(f'  <testsuite name="{escape(report.script_name)}" '
                     f'tests="{len(report.checks)}" failures="{failures}">')
        for check in report.checks:
            name = escape(check.expectation.label())
            if check.passed:
                lines.append(f'    <testcase name="{name}"/>')
            else:
                lines.append(f'    <testcase name="{name}">')
                lines.append(f'      <failure message="{escape(check.detail)}"/>')
                lines.append("    </testcase>")
        lines.append("  </testsuite>")
    lines.append("</testsuites>")
    return "\n".join(lines) + "\n"
