"""The session engine: one event loop owning all dialogue state.

Stimuli (user utterances, monitor alerts, idle timeouts) dispatch one at a
time through this loop; nothing else mutates DialogueState, progress or
playback. The monitor runs off the same clock: ``advance`` moves simulated
time forward, firing due ticks and idle checks in time order. Outbound
messages for streaming clients accumulate in ``outbound`` with a
monotonically increasing ``record_id`` for reconnect dedupe.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .. import media, monitor
from ..adapters import (EchoGenerator, RecordingSpeech, RemoteModelAdapter,
                        ScriptedPerceiver)
from ..clock import Clock, SimulatedClock
from ..dialogue.classify import (KeywordClassifier, classify_event,
                                 parse_skip_declaration)
from ..dialogue.events import (ALERT_EVENTS, REJECTED, DialogueState,
                               EventKind, InteractionEvent, ResetReason)
from ..dialogue.respond import APOLOGY_TEXT, ResponseEnvelope, render_response
from ..dialogue.transitions import handle_idle, transition
from ..errors import (ClassificationUnavailable, GenerationUnavailable,
                      InvalidCommand, NoSegmentFound, SchemaViolation,
                      StartupFailure)
from ..knowledge.serialize import read_knowledge
from ..knowledge.types import RecipeKnowledge
from ..media import (EvidenceIndex, PlaybackCommand, PlaybackState,
                     locate_segments, parse_media_command)
from ..memory import MemoryStore, RecordKind, assemble_context
from .config import SessionConfig
from .trace import TraceWriter

FALLBACK_NO_SEGMENT = "I could not find a matching part of the video to play."


@dataclass
class AdapterSet:
    classifier: object
    generator: object
    perceiver: object
    tts: object
    judge: object | None = None  # None selects the rule-based judge


def mock_adapters() -> AdapterSet:
    return AdapterSet(
        classifier=KeywordClassifier(),
        generator=EchoGenerator(),
        perceiver=ScriptedPerceiver(),
        tts=RecordingSpeech(),
    )


def adapters_from_config(cfg: SessionConfig) -> AdapterSet:
    adapters = mock_adapters()
    for role in ("classifier", "generator", "perceiver", "tts"):
        endpoint = cfg.adapters.get(role, "mock")
        if endpoint != "mock":
            setattr(adapters, role, RemoteModelAdapter(endpoint))
    return adapters


@dataclass
class DispatchResult:
    """What one stimulus produced; returned by ingest_utterance."""

    event: EventKind | None = None
    state: DialogueState = DialogueState.S0_IDLE
    envelope: ResponseEnvelope | None = None
    playback: PlaybackState | None = None
    rejected: bool = False
    error: str | None = None


class Session:
    def __init__(self, cfg: SessionConfig, knowledge: RecipeKnowledge,
                 adapters: AdapterSet, clock: Clock | None = None, *,
                 memory_stream: str | Path | None = None,
                 trace_path: str | Path | None = None):
        cfg.validate()
        knowledge.validate()
        self.cfg = cfg
        self.knowledge = knowledge
        self.adapters = adapters
        self.clock: Clock = clock or SimulatedClock()
        self.state = DialogueState.S0_IDLE
        self.progress = monitor.ProgressState()
        self.playback = PlaybackState()
        self.store = MemoryStore(memory_stream)
        self.trace = TraceWriter(trace_path)
        self.evidence = EvidenceIndex()
        self.limiter = monitor.AlertLimiter(cfg.alert_cooldown)
        self.outbound: list[dict] = []
        self.errors: list[str] = []
        self.last_activity = self.clock.now()
        self.tick_count = 0
        self.last_observation: monitor.Observation | None = None
        self._frames: list[dict] = []
        self._audio: list[dict] = []
        self._utterance_count = 0
        self._judgment_count = 0
        self._response_count = 0
        self._outbound_seq = 0
        self._last_evidence: list[media.SegmentRef] = []

    # -- outbound stream -----------------------------------------------------

    def _emit(self, kind: str, **payload) -> dict:
        self._outbound_seq += 1
        message = {"kind": kind, "record_id": self._outbound_seq,
                   "t": self.clock.now(), **payload}
        self.outbound.append(message)
        return message

    def drain_outbound(self, after: int = 0) -> list[dict]:
        return [m for m in self.outbound if m["record_id"] > after]

    # -- ingress ---------------------------------------------------------------

    def ingest_frames(self, records: list[dict]) -> None:
        self._frames.extend(records)

    def ingest_audio(self, records: list[dict]) -> None:
        self._audio.extend(records)

    def declare_skip(self, step_index: int) -> None:
        """User-declared skip: suppress missed-step alerts for this step."""
        self.progress = self.progress.declare_skip(step_index)
        self.store.append(RecordKind.MEDIA_ACTION, self.clock.now(),
                          f"declared skip of step {step_index}",
                          step_index=step_index)

    def ingest_utterance(self, text: str) -> DispatchResult:
        """Classify, transition and respond to one user utterance."""
        if not text or not text.strip():
            raise ValueError("empty utterance")
        now = self.clock.now()
        self._utterance_count += 1
        self.store.append(RecordKind.UTTERANCE, now, text)
        self.last_activity = now

        skip_step = parse_skip_declaration(text)
        if skip_step is not None:
            self.declare_skip(skip_step)
            self.trace.append(
                stimulus="utterance", utterance=text, classified_event=None,
                from_state=self.state.value, to_state=self.state.value,
                received_at=now, completed_at=self.clock.now())
            return DispatchResult(event=None, state=self.state)

        summary = self.last_observation.summary() if self.last_observation else None
        classification_error = None
        try:
            kind = classify_event(text, summary, self.state, self.adapters.classifier)
        except ClassificationUnavailable as exc:
            kind = EventKind.E4_GENERAL_VISUAL_QUERY
            classification_error = f"classifier unavailable: {exc}"
            self.errors.append(classification_error)

        if kind is EventKind.E10_MEDIA_CONTROL:
            event = InteractionEvent(kind, utterance_id=self._utterance_count)
            return self._dispatch_media(text, event, now)
        if kind is EventKind.E9_RESET:
            event = InteractionEvent(EventKind.E9_RESET, reason=ResetReason.SATISFIED)
        else:
            event = InteractionEvent(kind, utterance_id=self._utterance_count)
        return self._dispatch_event(event, utterance=text, received_at=now,
                                    error=classification_error)

    # -- dispatch ---------------------------------------------------------------

    def _dispatch_media(self, text: str, event: InteractionEvent,
                        received_at: float) -> DispatchResult:
        cmd, content = parse_media_command(text)
        error = None
        try:
            segments = None
            if content is not None:
                # content-bearing play/replay loads a freshly located queue
                segments = locate_segments(content, self.knowledge,
                                           evidence=self.evidence)
                if cmd in (PlaybackCommand.PLAY, PlaybackCommand.REPLAY):
                    cmd = PlaybackCommand.PLAY
            elif cmd in (PlaybackCommand.PLAY, PlaybackCommand.REPLAY) and not self.playback.queue:
                segments = self._last_evidence or None
                if cmd is PlaybackCommand.REPLAY and segments:
                    cmd = PlaybackCommand.PLAY
            self.playback = media.control(cmd, self.playback, segments)
            self.store.append(RecordKind.MEDIA_ACTION, received_at, f"{cmd.value}: {text}")
            self._emit_playback()
        except NoSegmentFound:
            error = "NoSegmentFound"
            self._spoken_fallback(FALLBACK_NO_SEGMENT, received_at)
        except InvalidCommand as exc:
            error = f"InvalidCommand: {exc}"
            self._emit("error", code="InvalidCommand", text=str(exc))
        self.trace.append(
            stimulus="utterance", utterance=text,
            classified_event=EventKind.E10_MEDIA_CONTROL.value,
            from_state=self.state.value, to_state=self.state.value,
            received_at=received_at, completed_at=self.clock.now(), error=error)
        self.last_activity = self.clock.now()
        return DispatchResult(event=EventKind.E10_MEDIA_CONTROL, state=self.state,
                              playback=self.playback, error=error)

    def _dispatch_event(self, event: InteractionEvent, *, utterance: str | None,
                        received_at: float, alert_text: str = "",
                        error: str | None = None) -> DispatchResult:
        from_state = self.state
        target = transition(self.state, event.kind)
        if target is REJECTED:
            self.trace.append(
                stimulus="utterance" if utterance else "alert",
                utterance=utterance, classified_event=event.kind.value,
                from_state=from_state.value, to_state=from_state.value,
                received_at=received_at, completed_at=self.clock.now(),
                error="rejected")
            self.errors.append(f"rejected {event.kind.value} in {from_state.value}")
            return DispatchResult(event=event.kind, state=self.state, rejected=True)

        self.state = target
        if from_state is not target:
            self._emit("state_change", from_state=from_state.value,
                       to_state=target.value, event=event.kind.value,
                       progress=self._progress_payload())

        envelope = None
        if target is not DialogueState.S0_IDLE:
            envelope, error = self._respond(event, utterance, alert_text, error)

        self.trace.append(
            stimulus="utterance" if utterance else ("alert" if event.kind in ALERT_EVENTS else "idle"),
            utterance=utterance, classified_event=event.kind.value,
            from_state=from_state.value, to_state=target.value,
            received_at=received_at, completed_at=self.clock.now(),
            response_id=envelope.response_id if envelope else None, error=error)
        self.last_activity = self.clock.now()
        return DispatchResult(event=event.kind, state=self.state,
                              envelope=envelope, error=error)

    def _respond(self, event: InteractionEvent, utterance: str | None,
                 alert_text: str, error: str | None) -> tuple[ResponseEnvelope | None, str | None]:
        context = assemble_context(
            self.state, event.kind, utterance, self.cfg.context_budget,
            self.store, self.knowledge, self.progress.current_step,
            alert_text=alert_text)
        self._response_count += 1
        try:
            envelope = render_response(
                self.state, context, self.adapters.generator,
                response_id=self._response_count, created_at=self.clock.now(),
                knowledge=self.knowledge)
        except GenerationUnavailable as exc:
            message = f"generator unavailable: {exc}"
            self.errors.append(message)
            self._spoken_fallback(APOLOGY_TEXT, self.clock.now())
            return None, message

        self.evidence.register(envelope.response_id, envelope.evidence_segments)
        self._last_evidence = list(envelope.evidence_segments)
        self.store.append(
            RecordKind.RESPONSE, self.clock.now(), envelope.text,
            sentence_indices=tuple(s.sentence_index for s in envelope.evidence_segments),
            response_id=envelope.response_id)
        self._emit("response", response_id=envelope.response_id,
                   state=envelope.state.value, text=envelope.text,
                   evidence=[{"sentence": s.sentence_index, "t_start": s.t_start,
                              "t_end": s.t_end} for s in envelope.evidence_segments],
                   sources=envelope.sources)
        return envelope, error

    def _spoken_fallback(self, text: str, at: float) -> None:
        self._response_count += 1
        self.store.append(RecordKind.RESPONSE, at, text,
                          response_id=self._response_count)
        self.evidence.register(self._response_count, [])
        self._emit("response", response_id=self._response_count,
                   state=self.state.value, text=text, evidence=[], sources=[])

    # -- time ------------------------------------------------------------------

    def advance(self, seconds: float) -> None:
        """Move simulated time forward, firing idle checks and monitor ticks.

        Only meaningful with a SimulatedClock; live serving advances real
        time and calls ``poll`` on a timer instead.
        """
        if not isinstance(self.clock, SimulatedClock):
            raise RuntimeError("advance requires a simulated clock")
        end = self.clock.now() + seconds
        while True:
            next_tick = (self.tick_count + 1) * self.cfg.tick_period
            if next_tick <= end + 1e-9:
                self.clock.set(next_tick)
                self._check_idle()
                self._run_tick()
            else:
                break
        if self.clock.now() < end:
            self.clock.set(end)
        self._check_idle()

    def poll(self) -> None:
        """Wall-clock variant of advance: fire anything due at now()."""
        now = self.clock.now()
        while (self.tick_count + 1) * self.cfg.tick_period <= now:
            self._run_tick()
        self._check_idle()

    def _check_idle(self) -> None:
        kind = handle_idle(self.clock.now(), self.last_activity, self.state,
                           self.cfg.idle_timeout)
        if kind is EventKind.E9_RESET:
            event = InteractionEvent(EventKind.E9_RESET, reason=ResetReason.IDLE_TIMEOUT)
            self._dispatch_event(event, utterance=None, received_at=self.clock.now())

    def _run_tick(self) -> None:
        self.tick_count += 1
        now = self.clock.now()
        prev = now - self.cfg.tick_period
        if isinstance(self.adapters.perceiver, ScriptedPerceiver):
            self.adapters.perceiver.set_time(now)
        frame_window = [f for f in self._frames if prev < f.get("t", 0.0) <= now]
        audio_window = [a for a in self._audio if prev < a.get("t", 0.0) <= now]

        obs = monitor.tick(self.tick_count, now, frame_window, audio_window,
                           self.adapters.perceiver)
        self.last_observation = obs
        self.store.append(RecordKind.OBSERVATION, now, obs.summary(),
                          step_index=obs.matched_step, tick_id=obs.tick_id)

        self._judgment_count += 1
        judgment = monitor.judge(obs, self.knowledge, self.progress,
                                 self._judgment_count, self.adapters.judge)
        self.store.append(
            RecordKind.JUDGMENT, now,
            f"relevant={judgment.relevant} correct={judgment.correct} "
            f"missed={list(judgment.missed_steps)} advanced_to={judgment.advanced_to}",
            tick_id=obs.tick_id)

        # Advancement lands before alert computation: moving on from a step
        # counts as completing it, so only steps still missing afterwards
        # can alert. Skipping two ahead still flags the jumped-over step.
        self.progress = monitor.advance_progress(judgment, self.progress,
                                                 len(self.knowledge.steps))
        if obs.degraded:
            return
        still_missing = tuple(
            s for s in judgment.missed_steps
            if s not in self.progress.completed_steps
            and s not in self.progress.skipped_steps)
        effective = replace(judgment, missed_steps=still_missing)
        for alert in monitor.emit_alerts(effective, now=now, limiter=self.limiter):
            self._dispatch_alert(alert, effective, now)

    def _dispatch_alert(self, alert: InteractionEvent, judgment: monitor.Judgment,
                        now: float) -> None:
        text = self._alert_text(alert.kind, judgment)
        self.store.append(RecordKind.ALERT, now, text, tick_id=judgment.tick_id)
        self._emit("alert", event=alert.kind.value, judgment_id=judgment.judgment_id,
                   text=text, progress=self._progress_payload())
        self._dispatch_event(alert, utterance=None, received_at=now, alert_text=text)

    def _progress_payload(self) -> dict:
        return {
            "current_step": self.progress.current_step,
            "total_steps": len(self.knowledge.steps),
            "completed": sorted(self.progress.completed_steps),
            "skipped": sorted(self.progress.skipped_steps),
        }

    def _alert_text(self, kind: EventKind, judgment: monitor.Judgment) -> str:
        if kind is EventKind.E5_MISSED_STEP:
            parts = []
            for index in judgment.missed_steps:
                step = next((s for s in self.knowledge.steps if s.index == index), None)
                summary = step.summary if step else "unknown step"
                parts.append(f"step {index} ({summary})")
            return "It appears you have missed " + ", ".join(parts) + "."
        step = next((s for s in self.knowledge.steps
                     if s.index == self.progress.current_step), None)
        summary = step.summary if step else "the current step"
        return (f"The current action does not match step "
                f"{self.progress.current_step} ({summary}).")

    # -- speech ------------------------------------------------------------------

    def speak(self, envelope: ResponseEnvelope) -> str | None:
        """Send a response to TTS; segment playback pauses first."""
        if self.playback.status is media.PlaybackStatus.PLAYING:
            self.playback = media.control(PlaybackCommand.PAUSE, self.playback)
            self._emit_playback()
        try:
            ref = self.adapters.tts.speak(envelope.text, self.cfg.tts_speed)
        except Exception as exc:
            self.errors.append(f"tts failed: {exc}")
            self._emit("tts", response_id=envelope.response_id, audio_ref=None,
                       speed=self.cfg.tts_speed, failed=True)
            return None
        self._emit("tts", response_id=envelope.response_id, audio_ref=ref,
                   speed=self.cfg.tts_speed, failed=False)
        return ref

    def _emit_playback(self) -> None:
        segment = self.playback.current_segment()
        self._emit("playback", status=self.playback.status.value,
                   segment=None if segment is None else {
                       "sentence": segment.sentence_index,
                       "t_start": segment.t_start, "t_end": segment.t_end,
                   },
                   position=self.playback.position,
                   queue_length=len(self.playback.queue),
                   separator_cue=media.SEPARATOR_CUE_SECONDS)

    # -- snapshots ------------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "state": self.state.value,
            "progress": {
                "current_step": self.progress.current_step,
                "completed_steps": list(self.progress.completed_steps),
                "skipped_steps": sorted(self.progress.skipped_steps),
            },
            "playback": self.playback.status.value,
            "tick_count": self.tick_count,
            "memory_records": len(self.store),
        }


def start_session(cfg: SessionConfig, adapters: AdapterSet | None = None,
                  clock: Clock | None = None, *,
                  memory_stream: str | Path | None = None,
                  trace_path: str | Path | None = None) -> Session:
    """Load the recipe, wire adapters, and return a fresh session in idle."""
    cfg.validate()
    try:
        knowledge = read_knowledge(cfg.recipe_path)
    except (OSError, SchemaViolation) as exc:
        raise StartupFailure(f"cannot load recipe {cfg.recipe_path}: {exc}") from exc
    adapters = adapters or adapters_from_config(cfg)
    return Session(cfg, knowledge, adapters, clock,
                   memory_stream=memory_stream, trace_path=trace_path)


def resume_session(cfg: SessionConfig, memory_stream: str | Path,
                   adapters: AdapterSet | None = None,
                   clock: Clock | None = None) -> Session:
    """Crash recovery: reload memory records from a stream file, state S0."""
    session = start_session(cfg, adapters, clock)
    count = session.store.load_stream(memory_stream)
    records = session.store.records()
    if records and isinstance(session.clock, SimulatedClock):
        # keep appends monotone past the recovered history
        session.clock.set(max(session.clock.now(), records[-1].timestamp))
    session.errors.append(f"resumed with {count} recovered records")
    return session
