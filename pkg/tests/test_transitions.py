import pytest

from mica.dialogue.events import (REJECTED, DialogueState, EventKind,
                                  InteractionEvent, ResetReason)
from mica.dialogue.transitions import (format_table, handle_idle,
                                       load_fixture_table, transition)

ALL_STATES = list(DialogueState)
ALL_EVENTS = list(EventKind)


def test_paper_anchored_cells():
    assert transition(DialogueState.S0_IDLE, EventKind.E2_STEP_QUERY) is DialogueState.S2_STEP_GUIDE
    assert transition(DialogueState.S0_IDLE, EventKind.E3_PROBLEM_QUERY) is DialogueState.S3_PROBLEM_SOLVING
    assert transition(DialogueState.S0_IDLE, EventKind.E5_MISSED_STEP) is DialogueState.S3_PROBLEM_SOLVING
    assert transition(DialogueState.S0_IDLE, EventKind.E6_INCORRECT_STEP) is DialogueState.S3_PROBLEM_SOLVING


def test_reset_in_idle_is_identity():
    assert transition(DialogueState.S0_IDLE, EventKind.E9_RESET) is DialogueState.S0_IDLE


def test_follow_up_and_flag_rejected_from_idle():
    assert transition(DialogueState.S0_IDLE, EventKind.E7_FOLLOW_UP) is REJECTED
    assert transition(DialogueState.S0_IDLE, EventKind.E8_FLAG_RESPONSE_WRONG) is REJECTED


def test_media_control_preserves_every_state():
    for state in ALL_STATES:
        assert transition(state, EventKind.E10_MEDIA_CONTROL) is state


def test_function_matches_fixture_table_cell_for_cell():
    table = load_fixture_table()
    checked = 0
    for state_code, row in table["cells"].items():
        for event_code, expected in row.items():
            got = transition(DialogueState(state_code), EventKind(event_code))
            observed = "Rejected" if got is REJECTED else got.value
            assert observed == expected, f"({state_code}, {event_code})"
            checked += 1
    assert checked == 70


def test_fixture_rejected_count():
    table = load_fixture_table()
    rejected = sum(1 for row in table["cells"].values()
                   for outcome in row.values() if outcome == "Rejected")
    assert rejected == 2


def test_transition_is_total():
    for state in ALL_STATES:
        for event in ALL_EVENTS:
            result = transition(state, event)
            assert result is REJECTED or isinstance(result, DialogueState)


def test_reset_always_returns_to_idle():
    for state in ALL_STATES:
        assert transition(state, EventKind.E9_RESET) is DialogueState.S0_IDLE


def test_format_table_prints_all_rows():
    text = format_table()
    for state in ALL_STATES:
        assert state.value in text
    assert "Rejected" in text


# -- idle handling --

def test_idle_fires_at_exact_timeout():
    assert handle_idle(5.0, 0.0, DialogueState.S3_PROBLEM_SOLVING) is EventKind.E9_RESET


def test_idle_below_threshold_does_nothing():
    assert handle_idle(4.9, 0.0, DialogueState.S3_PROBLEM_SOLVING) is None


def test_idle_state_never_resets():
    assert handle_idle(60.0, 0.0, DialogueState.S0_IDLE) is None


def test_idle_timeout_configurable():
    assert handle_idle(3.0, 0.0, DialogueState.S1_FOOD_STATE, idle_timeout=3.0) is EventKind.E9_RESET
    assert handle_idle(2.9, 0.0, DialogueState.S1_FOOD_STATE, idle_timeout=3.0) is None


# -- event payload invariants --

def test_alert_events_require_judgment_id():
    with pytest.raises(ValueError):
        InteractionEvent(EventKind.E5_MISSED_STEP)
    InteractionEvent(EventKind.E5_MISSED_STEP, judgment_id=1)


def test_utterance_events_require_utterance_id():
    with pytest.raises(ValueError):
        InteractionEvent(EventKind.E1_FOOD_STATE_QUERY)
    InteractionEvent(EventKind.E1_FOOD_STATE_QUERY, utterance_id=1)


def test_reset_requires_reason():
    with pytest.raises(ValueError):
        InteractionEvent(EventKind.E9_RESET)
    InteractionEvent(EventKind.E9_RESET, reason=ResetReason.IDLE_TIMEOUT)
