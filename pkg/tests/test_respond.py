import pytest

from mica.adapters import CannedGenerator, EchoGenerator, FailingAdapter
from mica.dialogue.events import DialogueState, EventKind
from mica.dialogue.respond import render_response
from mica.dialogue.templates import load_template, render_prompt, template_id
from mica.errors import GenerationUnavailable
from mica.media import SegmentReason
from mica.memory import MemoryStore, RecordKind, assemble_context

S1 = DialogueState.S1_FOOD_STATE
S2 = DialogueState.S2_STEP_GUIDE


def context_for(state, pasta, query="what's next", current_step=3, alert=""):
    store = MemoryStore()
    store.append(RecordKind.UTTERANCE, 0.0, "earlier question")
    return assemble_context(state, EventKind.E2_STEP_QUERY, query, 10_000,
                            store, pasta, current_step, alert_text=alert)


def test_every_response_state_has_a_template():
    for state in (DialogueState.S1_FOOD_STATE, DialogueState.S2_STEP_GUIDE,
                  DialogueState.S3_PROBLEM_SOLVING, DialogueState.S4_GENERAL_VISUAL,
                  DialogueState.S5_CORRECTION_REVIEW, DialogueState.S6_DETAIL_ELABORATION):
        text = load_template(state)
        assert text.startswith(f"template: {template_id(state)}")


def test_no_template_for_idle():
    with pytest.raises(ValueError):
        load_template(DialogueState.S0_IDLE)


def test_echo_mock_includes_step_summary_and_template_id(pasta):
    context = context_for(S2, pasta, query="what's my next step", current_step=3)
    envelope = render_response(S2, context, EchoGenerator(), response_id=1,
                               knowledge=pasta)
    assert "boil the pasta" in envelope.text
    assert "S2.v1" in envelope.text
    assert envelope.state is S2


def test_canned_food_state_response(pasta):
    context = context_for(S1, pasta, query="is it cooked?", current_step=3)
    context.recent_observations = []
    canned = CannedGenerator(["The pasta needs two more minutes; it is still firm at the core."])
    envelope = render_response(S1, context, canned, response_id=7, knowledge=pasta)
    assert envelope.state is S1
    assert "two more minutes" in envelope.text
    assert envelope.response_id == 7


def test_generator_failure_raises(pasta):
    context = context_for(S2, pasta)
    with pytest.raises(GenerationUnavailable):
        render_response(S2, context, FailingAdapter(), knowledge=pasta)


def test_no_response_in_idle(pasta):
    context = context_for(S2, pasta)
    with pytest.raises(ValueError):
        render_response(DialogueState.S0_IDLE, context, EchoGenerator())


def test_evidence_snaps_to_sentence_intervals(pasta):
    context = context_for(S2, pasta, current_step=5)
    envelope = render_response(S2, context, EchoGenerator(), response_id=2,
                               knowledge=pasta)
    assert envelope.evidence_segments
    for segment in envelope.evidence_segments:
        unit = pasta.sentences[segment.sentence_index]
        assert (segment.t_start, segment.t_end) == (unit.t_start, unit.t_end)
        assert segment.reason is SegmentReason.RESPONSE_EVIDENCE


def test_correction_template_highlights_follow_up(pasta):
    prompt = render_prompt(DialogueState.S5_CORRECTION_REVIEW,
                           context_for(DialogueState.S5_CORRECTION_REVIEW, pasta,
                                       query="no, the LEFT pan"))
    assert "special attention" in prompt
    assert "no, the LEFT pan" in prompt


def test_elaboration_template_highlights_follow_up(pasta):
    prompt = render_prompt(DialogueState.S6_DETAIL_ELABORATION,
                           context_for(DialogueState.S6_DETAIL_ELABORATION, pasta,
                                       query="how thin exactly?"))
    assert "special attention" in prompt
    assert "how thin exactly?" in prompt


def test_alert_text_reaches_problem_template(pasta):
    context = context_for(DialogueState.S3_PROBLEM_SOLVING, pasta, query=None,
                          current_step=2, alert="It appears you have missed step 2 (add salt to the boiling water).")
    prompt = render_prompt(DialogueState.S3_PROBLEM_SOLVING, context)
    assert "missed step 2" in prompt
    assert "salt" in prompt
