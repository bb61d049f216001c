"""The deterministic transition function and its shipped fixture table.

``transition`` is a pure total function over all 70 (state, event) pairs,
written as rules. The same table is shipped as a versioned fixture file
(``data/transition_table.v1.json``) that the conformance suite checks the
function against cell-for-cell and the ``conformance`` CLI prints.
"""

from __future__ import annotations

import json
from importlib import resources

from .events import (ALERT_EVENTS, QUERY_EVENTS, REJECTED, DialogueState,
                     EventKind, Rejected)

TABLE_VERSION = "v1"

_QUERY_TARGET = {
    EventKind.E1_FOOD_STATE_QUERY: DialogueState.S1_FOOD_STATE,
    EventKind.E2_STEP_QUERY: DialogueState.S2_STEP_GUIDE,
    EventKind.E3_PROBLEM_QUERY: DialogueState.S3_PROBLEM_SOLVING,
    EventKind.E4_GENERAL_VISUAL_QUERY: DialogueState.S4_GENERAL_VISUAL,
}


def transition(state: DialogueState, event: EventKind) -> DialogueState | Rejected:
    """Next dialogue state, or REJECTED when the event is not accepted.

    Rules:
    * reset always returns to idle;
    * media control never changes state;
    * fresh queries route to their response state from anywhere (a new
      top-level question implies the previous answer satisfied);
    * monitor alerts route to problem solving from anywhere;
    * follow-up and wrong-flag need a prior response, so they are rejected
      in idle and otherwise go to detail elaboration / correction review.
    """
    if event is EventKind.E9_RESET:
        return DialogueState.S0_IDLE
    if event is EventKind.E10_MEDIA_CONTROL:
        return state
    if event in QUERY_EVENTS:
        return _QUERY_TARGET[event]
    if event in ALERT_EVENTS:
        return DialogueState.S3_PROBLEM_SOLVING
    if state is DialogueState.S0_IDLE:
        return REJECTED
    if event is EventKind.E7_FOLLOW_UP:
        return DialogueState.S6_DETAIL_ELABORATION
    return DialogueState.S5_CORRECTION_REVIEW


def handle_idle(now: float, last_activity: float, state: DialogueState,
                idle_timeout: float = 5.0) -> EventKind | None:
    """Return a reset event once the session has sat idle long enough."""
    if state is DialogueState.S0_IDLE:
        return None
    if now - last_activity >= idle_timeout:
        return EventKind.E9_RESET
    return None


def load_fixture_table() -> dict:
    """The shipped transition table: {state: {event: next-state-or-"Rejected"}}."""
    text = resources.files("mica.dialogue").joinpath(
        f"data/transition_table.{TABLE_VERSION}.json").read_text(encoding="utf-8")
    return json.loads(text)


def format_table(table: dict | None = None) -> str:
    """Render the table as aligned text for the conformance subcommand."""
    table = table or load_fixture_table()
    events = table["events"]
    width = 9
    lines = ["state".ljust(6) + "".join(e.ljust(width) for e in events)]
    for state in table["states"]:
        row = table["cells"][state]
        lines.append(state.ljust(6) + "".join(str(row[e]).ljust(width) for e in events))
    return "\n".join(lines)
