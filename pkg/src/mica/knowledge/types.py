"""Data model for structured recipe knowledge distilled from a video."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..errors import MalformedTranscript, SchemaViolation

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TranscriptWord:
    text: str
    start: float
    end: float


@dataclass
class TimedTranscript:
    """Word-timed speech transcript extracted from the video's vocal track."""

    words: list[TranscriptWord]
    language: str = "en"

    def validate(self, video_duration: float | None = None) -> None:
        t = 0.0
        for w in self.words:
            if w.start > w.end:
                raise MalformedTranscript(f"word {w.text!r} has start > end")
            if w.start < t:
                raise MalformedTranscript(f"word {w.text!r} starts before the previous word ends")
            t = w.end
        if self.words and self.words[0].start < 0:
            raise MalformedTranscript("negative word time")
        if video_duration is not None and self.words and t > video_duration:
            raise MalformedTranscript("word times exceed video duration")


@dataclass(frozen=True)
class FrameRecord:
    """One ingested frame: a timestamp plus a content descriptor vector."""

    timestamp: float
    descriptor: tuple[float, ...]

    @property
    def content_hash(self) -> str:
        raw = ",".join(repr(x) for x in self.descriptor)
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class KeyframeRef:
    timestamp: float
    content_hash: str


@dataclass
class SentenceUnit:
    """One transcript sentence with its time span and per-scene keyframes."""

    index: int
    text: str
    t_start: float
    t_end: float
    keyframes: list[KeyframeRef] = field(default_factory=list)
    visual_description: str = ""
    audio_description: str = ""


@dataclass
class SceneCutList:
    """Timestamps where the visual content changes, with the threshold used."""

    cuts: list[float]
    threshold: float

    def validate(self, video_duration: float | None = None) -> None:
        previous = 0.0
        for cut in self.cuts:
            if cut <= previous:
                raise SchemaViolation("scene cuts must be strictly increasing and nonzero")
            previous = cut
        if video_duration is not None and self.cuts and self.cuts[-1] >= video_duration:
            raise SchemaViolation("scene cut beyond video duration")


@dataclass
class Ingredient:
    name: str
    quantity: str
    first_mention: int  # sentence index


@dataclass
class Step:
    index: int
    summary: str
    first_sentence: int
    last_sentence: int  # inclusive

    def sentence_range(self) -> range:
        return range(self.first_sentence, self.last_sentence + 1)


@dataclass
class RecipeKnowledge:
    """Everything the engine knows about one video recipe."""

    recipe_id: str
    title: str
    video_duration: float
    sentences: list[SentenceUnit]
    ingredients: list[Ingredient]
    steps: list[Step]
    schema_version: int = SCHEMA_VERSION

    def validate(self) -> None:
        if not self.sentences:
            raise SchemaViolation("a recipe must have at least one sentence")
        if self.video_duration <= 0:
            raise SchemaViolation("video_duration must be positive")
        for i, unit in enumerate(self.sentences):
            if unit.index != i:
                raise SchemaViolation(f"sentence {i} carries index {unit.index}")
            if not unit.text:
                raise SchemaViolation(f"sentence {i} has empty text")
            if not unit.t_start < unit.t_end:
                raise SchemaViolation(f"sentence {i} has t_start >= t_end")
            if i and unit.t_start < self.sentences[i - 1].t_end:
                raise SchemaViolation(f"sentence {i} overlaps its predecessor")
            for kf in unit.keyframes:
                if not unit.t_start <= kf.timestamp <= unit.t_end:
                    raise SchemaViolation(f"keyframe outside sentence {i} interval")
        n = len(self.sentences)
        last_end = -1
        for step in self.steps:
            if not 0 <= step.first_sentence <= step.last_sentence < n:
                raise SchemaViolation(f"step {step.index} references a missing sentence")
            if step.first_sentence <= last_end:
                raise SchemaViolation(f"step {step.index} overlaps an earlier step")
            last_end = step.last_sentence
        for ing in self.ingredients:
            if not 0 <= ing.first_mention < n:
                raise SchemaViolation(f"ingredient {ing.name!r} mentions a missing sentence")

    def step_for_sentence(self, sentence_index: int) -> Step | None:
        for step in self.steps:
            if step.first_sentence <= sentence_index <= step.last_sentence:
                return step
        return None

    def sentences_for_step(self, step_index: int) -> list[SentenceUnit]:
        for step in self.steps:
            if step.index == step_index:
                return [self.sentences[i] for i in step.sentence_range()]
        return []
