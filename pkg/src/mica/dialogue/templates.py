"""State-specific prompt templates, shipped as versioned fixture files."""

from __future__ import annotations

from importlib import resources

from .events import DialogueState

TEMPLATE_VERSION = "v1"

_RESPONSE_STATES = (
    DialogueState.S1_FOOD_STATE, DialogueState.S2_STEP_GUIDE,
    DialogueState.S3_PROBLEM_SOLVING, DialogueState.S4_GENERAL_VISUAL,
    DialogueState.S5_CORRECTION_REVIEW, DialogueState.S6_DETAIL_ELABORATION,
)


def template_id(state: DialogueState) -> str:
    return f"{state.value}.{TEMPLATE_VERSION}"


def load_template(state: DialogueState) -> str:
    if state not in _RESPONSE_STATES:
        raise ValueError(f"no response template for {state}")
    return resources.files("mica.dialogue").joinpath(
        f"templates/{template_id(state)}.txt").read_text(encoding="utf-8")


def _lines(items, render) -> str:
    rendered = [render(item) for item in items]
    return "\n".join(rendered) if rendered else "(none)"


def render_prompt(state: DialogueState, context) -> str:
    """Fill the state's template with the assembled context bundle."""
    template = load_template(state)
    return template.format(
        query=context.user_query or "(none)",
        alert=context.alert_text or "(none)",
        current_step=context.current_step_summary or "(unknown)",
        knowledge=_lines(context.knowledge_slices,
                         lambda u: f"[s{u.index}] {u.text}"
                                   + (f" | looks: {u.visual_description}" if u.visual_description else "")
                                   + (f" | sounds: {u.audio_description}" if u.audio_description else "")),
        observations=_lines(context.recent_observations, lambda r: f"[t{r.tick_id}] {r.text}"),
        history=_lines(context.recent_turns, lambda r: f"[{r.kind.value}] {r.text}"),
        retrieved=_lines(context.retrieved, lambda r: f"[#{r.record_id}] {r.text}"),
    )
