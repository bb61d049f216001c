"""Response rendering through the generator adapter."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import GenerationUnavailable
from ..media import SegmentRef, SegmentReason, segments_for_sentences
from .events import DialogueState
from .templates import render_prompt

#: Spoken when the generator is unavailable; the session stays in state.
APOLOGY_TEXT = "Sorry, I could not produce an answer just now. Please ask again."


@dataclass
class ResponseEnvelope:
    response_id: int
    state: DialogueState
    text: str
    evidence_segments: list[SegmentRef] = field(default_factory=list)
    sources: list[int] = field(default_factory=list)  # memory record ids
    created_at: float = 0.0


def render_response(state: DialogueState, context, generator, *,
                    response_id: int = 0, created_at: float = 0.0,
                    knowledge=None) -> ResponseEnvelope:
    """Fill the state's prompt template, generate, and attach evidence.

    Evidence segments are the context's knowledge slices snapped to their
    sentence intervals, so every answer points back at the exact video
    moments it drew from.
    """
    if state is DialogueState.S0_IDLE:
        raise ValueError("no response is ever rendered in the idle state")
    prompt = render_prompt(state, context)
    try:
        text = generator.generate(prompt)
    except Exception as exc:
        raise GenerationUnavailable(str(exc)) from exc
    if not text:
        raise GenerationUnavailable("generator returned empty text")

    evidence: list[SegmentRef] = []
    if knowledge is not None:
        indices = context.evidence_indices or [u.index for u in context.knowledge_slices]
        evidence = segments_for_sentences(knowledge, indices,
                                          SegmentReason.RESPONSE_EVIDENCE)
    sources = [r.record_id for r in context.retrieved]
    sources += [r.record_id for r in context.recent_turns]
    return ResponseEnvelope(
        response_id=response_id, state=state, text=text,
        evidence_segments=evidence, sources=sources, created_at=created_at,
    )
