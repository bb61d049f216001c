import pytest

from mica.adapters import FailingAdapter
from mica.dialogue.classify import (KeywordClassifier, classify_event,
                                    load_keyword_rules, parse_skip_declaration)
from mica.dialogue.events import DialogueState, EventKind
from mica.errors import ClassificationUnavailable
from mica.monitor import Judgment

S0 = DialogueState.S0_IDLE
S2 = DialogueState.S2_STEP_GUIDE


@pytest.fixture(scope="module")
def classifier():
    return KeywordClassifier()


def classify(text, classifier, state=S0):
    return classify_event(text, None, state, classifier)


def test_food_state_exemplar(classifier):
    assert classify("Is the chicken cooked through?", classifier) is EventKind.E1_FOOD_STATE_QUERY


def test_step_query(classifier):
    assert classify("What's my next step?", classifier) is EventKind.E2_STEP_QUERY


def test_problem_query(classifier):
    assert classify("Help, I burnt the sauce", classifier) is EventKind.E3_PROBLEM_QUERY


def test_unmatched_utterance_defaults_to_general_visual(classifier):
    assert classify("Describe the counter from left to right", classifier) is EventKind.E4_GENERAL_VISUAL_QUERY


def test_follow_up_from_step_state(classifier):
    # the rule fixture row for E7, looked up like the shipped table says
    rules = load_keyword_rules()
    follow_up_row = next(r for r in rules["rules"] if r["event"] == "E7")
    assert "tell me more" in follow_up_row["keywords"]
    assert classify("tell me more", classifier, state=S2) is EventKind.E7_FOLLOW_UP


def test_flag_wrong(classifier):
    assert classify("that's wrong, it was the left pan", classifier) is EventKind.E8_FLAG_RESPONSE_WRONG


def test_media_control(classifier):
    assert classify("pause", classifier) is EventKind.E10_MEDIA_CONTROL
    assert classify("Replay the part that tells me what ingredients I should prepare",
                    classifier) is EventKind.E10_MEDIA_CONTROL


def test_satisfied_maps_to_reset(classifier):
    assert classify("never mind", classifier) is EventKind.E9_RESET


def test_memory_reflection_is_food_state(classifier):
    assert classify("Did I already add the garlic?", classifier) is EventKind.E1_FOOD_STATE_QUERY


def test_keyword_match_respects_token_boundaries(classifier):
    # "display" must not trigger the media rule's "play"
    assert classify("the display shows nothing", classifier) is EventKind.E4_GENERAL_VISUAL_QUERY


def test_judgment_with_missed_steps_forces_e5(classifier):
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=True,
                 missed_steps=(2,))
    assert classify_event(None, "obs", S0, classifier, judgment=j) is EventKind.E5_MISSED_STEP


def test_incorrect_judgment_forces_e6(classifier):
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=False)
    assert classify_event(None, "obs", S0, classifier, judgment=j) is EventKind.E6_INCORRECT_STEP


def test_healthy_observation_yields_no_event(classifier):
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=True)
    assert classify_event(None, "obs", S0, classifier, judgment=j) is None


def test_utterance_alone_never_yields_alert_events():
    class AlertHappyClassifier:
        def classify(self, utterance, observation_summary, state):
            return "E5"

    got = classify_event("anything", None, S0, AlertHappyClassifier())
    assert got is EventKind.E4_GENERAL_VISUAL_QUERY


def test_classifier_failure_raises(classifier):
    with pytest.raises(ClassificationUnavailable):
        classify_event("hello", None, S0, FailingAdapter())


def test_unknown_event_code_raises():
    class WeirdClassifier:
        def classify(self, *args):
            return "E99"

    with pytest.raises(ClassificationUnavailable):
        classify_event("hello", None, S0, WeirdClassifier())


def test_no_stimulus_rejected(classifier):
    with pytest.raises(ValueError):
        classify_event(None, None, S0, classifier)


def test_skip_declarations():
    assert parse_skip_declaration("I'm skipping step 2") == 2
    assert parse_skip_declaration("skip 4") == 4
    assert parse_skip_declaration("let's skip step 10 please") == 10
    assert parse_skip_declaration("I skipped it earlier") is None
    assert parse_skip_declaration("what's my next step") is None
