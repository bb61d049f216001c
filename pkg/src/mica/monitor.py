"""Proactive scene monitor: periodic observation, judgment, alerts.

Every tick (2 s by default) the perceiver describes the scene; the judge
aligns that observation with the recipe and the progress tracker; missed
or incorrectly executed steps become E5/E6 alert events for the
orchestrator. A failed perceiver call degrades the tick instead of
skipping it, and degraded ticks never alert.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .adapters import tokenize
from .dialogue.events import EventKind, InteractionEvent
from .knowledge.types import RecipeKnowledge

DEFAULT_TICK_PERIOD = 2.0
DEFAULT_ALERT_COOLDOWN = 30.0

OBSERVE_PROMPT_TAG = "observe-scene.v1"


@dataclass(frozen=True)
class Observation:
    tick_id: int
    timestamp: float
    action: str = ""
    matched_step: int | None = None
    visible_items: tuple[str, ...] = ()
    sounds: tuple[str, ...] = ()
    raw_descriptor: str = ""
    degraded: bool = False

    def summary(self) -> str:
        parts = [f"action: {self.action or '(none)'}"]
        if self.matched_step is not None:
            parts.append(f"step: {self.matched_step}")
        if self.visible_items:
            parts.append(f"items: {', '.join(self.visible_items)}")
        if self.sounds:
            parts.append(f"sounds: {', '.join(self.sounds)}")
        if self.degraded:
            parts.append("(degraded)")
        return "; ".join(parts)


@dataclass(frozen=True)
class Judgment:
    judgment_id: int
    tick_id: int
    relevant: bool
    correct: bool | None = None
    missed_steps: tuple[int, ...] = ()
    advanced_to: int | None = None

    def __post_init__(self):
        if not self.relevant and self.correct is not None:
            raise ValueError("correct is defined only for relevant judgments")


@dataclass(frozen=True)
class ProgressState:
    current_step: int = 0
    completed_steps: tuple[int, ...] = ()
    skipped_steps: frozenset[int] = frozenset()

    def declare_skip(self, step_index: int) -> "ProgressState":
        return replace(self, skipped_steps=self.skipped_steps | {step_index})


def parse_observation_reply(reply: str, tick_id: int, timestamp: float) -> Observation:
    """Parse the perceiver's key-value reply; unparseable input degrades."""
    fields = {"action": "", "step": "", "items": "", "sounds": ""}
    seen = False
    for line in reply.splitlines():
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if sep and key in fields:
            fields[key] = value.strip()
            seen = True
    if not seen:
        return Observation(tick_id=tick_id, timestamp=timestamp,
                           raw_descriptor=reply, degraded=True)
    step: int | None = None
    if fields["step"]:
        try:
            step = int(fields["step"])
        except ValueError:
            return Observation(tick_id=tick_id, timestamp=timestamp,
                               raw_descriptor=reply, degraded=True)
    return Observation(
        tick_id=tick_id,
        timestamp=timestamp,
        action=fields["action"],
        matched_step=step,
        visible_items=tuple(x.strip() for x in fields["items"].split(",") if x.strip()),
        sounds=tuple(x.strip() for x in fields["sounds"].split(",") if x.strip()),
        raw_descriptor=reply,
    )


def tick(tick_id: int, timestamp: float, frame_window: list, audio_window: list,
         perceiver) -> Observation:
    """One monitor tick; perceiver failure yields a degraded sentinel."""
    try:
        reply = perceiver.perceive(frame_window, audio_window, OBSERVE_PROMPT_TAG)
    except Exception:
        return Observation(tick_id=tick_id, timestamp=timestamp, degraded=True)
    return parse_observation_reply(reply, tick_id, timestamp)


def judge(obs: Observation, knowledge: RecipeKnowledge, progress: ProgressState,
          judgment_id: int, judge_adapter=None) -> Judgment:
    """Align an observation with the recipe.

    The rule-based judge: the observation is relevant when the perceiver
    matched it to a step; execution is correct when the observed action
    shares a content word with that step's summary; missed steps are every
    step before the matched one that is neither completed nor skipped.
    A pluggable judge adapter may override the whole call.
    """
    if judge_adapter is not None:
        try:
            return judge_adapter.judge(obs, knowledge, progress, judgment_id)
        except Exception:
            return Judgment(judgment_id=judgment_id, tick_id=obs.tick_id, relevant=False)

    if obs.degraded or obs.matched_step is None:
        return Judgment(judgment_id=judgment_id, tick_id=obs.tick_id, relevant=False)
    step = next((s for s in knowledge.steps if s.index == obs.matched_step), None)
    if step is None:
        return Judgment(judgment_id=judgment_id, tick_id=obs.tick_id, relevant=False)

    correct = bool(set(tokenize(obs.action)) & set(tokenize(step.summary)))
    done = set(progress.completed_steps) | progress.skipped_steps
    missed = tuple(s.index for s in knowledge.steps
                   if s.index < obs.matched_step and s.index not in done)
    advanced_to = obs.matched_step if obs.matched_step > progress.current_step else None
    return Judgment(
        judgment_id=judgment_id, tick_id=obs.tick_id, relevant=True,
        correct=correct, missed_steps=missed, advanced_to=advanced_to,
    )


class AlertLimiter:
    """Suppresses repeats of the same (kind, step) alert within a cooldown."""

    def __init__(self, cooldown: float = DEFAULT_ALERT_COOLDOWN):
        self.cooldown = cooldown
        self._last_fired: dict[tuple[EventKind, int], float] = {}

    def allow(self, kind: EventKind, step: int, now: float) -> bool:
        key = (kind, step)
        last = self._last_fired.get(key)
        if last is not None and now - last < self.cooldown:
            return False
        self._last_fired[key] = now
        return True


def emit_alerts(j: Judgment, *, now: float = 0.0,
                limiter: AlertLimiter | None = None) -> list[InteractionEvent]:
    """Alert events for one judgment: E5 for missed steps, then E6 for an
    incorrectly executed step; at most one of each."""
    alerts: list[InteractionEvent] = []
    if j.missed_steps:
        if limiter is None or limiter.allow(EventKind.E5_MISSED_STEP, min(j.missed_steps), now):
            alerts.append(InteractionEvent(EventKind.E5_MISSED_STEP, judgment_id=j.judgment_id))
    if j.relevant and j.correct is False:
        step_key = j.advanced_to if j.advanced_to is not None else -1
        if limiter is None or limiter.allow(EventKind.E6_INCORRECT_STEP, step_key, now):
            alerts.append(InteractionEvent(EventKind.E6_INCORRECT_STEP, judgment_id=j.judgment_id))
    return alerts


def advance_progress(j: Judgment, progress: ProgressState,
                     n_steps: int | None = None) -> ProgressState:
    """Move the progress pointer when the judgment says a new step began."""
    if j.advanced_to is None:
        return progress
    if not j.advanced_to > progress.current_step:
        return progress  # backwards: rejected, unchanged
    if n_steps is not None and j.advanced_to >= n_steps:
        return progress  # out of range: rejected, unchanged
    completed = progress.completed_steps
    if progress.current_step not in completed:
        completed = completed + (progress.current_step,)
    return replace(progress, current_step=j.advanced_to, completed_steps=completed)
