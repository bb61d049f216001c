"""Sentence-level evidence segments and playback control.

The engine never touches actual video: it resolves requests to exact
sentence intervals of the source recipe and runs a small deterministic
playback state machine; rendering those intervals is the client's job.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .adapters import LexicalOverlapScorer, tokenize
from .errors import InvalidCommand, NoSegmentFound
from .knowledge.types import RecipeKnowledge

#: Spoken cue inserted between queued segments during playback.
SEPARATOR_CUE_SECONDS = 0.5

#: Free-text matches below this lexical score are treated as no match.
FLOOR_SCORE = 1.0


class SegmentReason(Enum):
    USER_REQUEST = "user_request"
    RESPONSE_EVIDENCE = "response_evidence"


@dataclass(frozen=True)
class SegmentRef:
    sentence_index: int
    t_start: float
    t_end: float
    reason: SegmentReason


class PlaybackStatus(Enum):
    STOPPED = "stopped"
    PLAYING = "playing"
    PAUSED = "paused"


class PlaybackCommand(Enum):
    PLAY = "play"
    PAUSE = "pause"
    RESUME = "resume"
    REPLAY = "replay"
    STOP = "stop"


@dataclass(frozen=True)
class PlaybackState:
    status: PlaybackStatus = PlaybackStatus.STOPPED
    queue: tuple[SegmentRef, ...] = ()
    current: int = 0
    position: float = 0.0

    def current_segment(self) -> SegmentRef | None:
        if self.queue and 0 <= self.current < len(self.queue):
            return self.queue[self.current]
        return None


def segments_for_sentences(knowledge: RecipeKnowledge, sentence_indices,
                           reason: SegmentReason) -> list[SegmentRef]:
    """Segment refs snapped exactly to the given sentences' intervals."""
    refs = []
    for index in sentence_indices:
        unit = knowledge.sentences[index]
        refs.append(SegmentRef(unit.index, unit.t_start, unit.t_end, reason))
    return refs


class EvidenceIndex:
    """Response-id to evidence mapping kept by the session."""

    def __init__(self):
        self._by_response: dict[int, tuple[SegmentRef, ...]] = {}

    def register(self, response_id: int, segments) -> None:
        self._by_response[response_id] = tuple(segments)

    def lookup(self, response_id: int) -> list[SegmentRef]:
        if response_id not in self._by_response:
            raise NoSegmentFound(f"unknown response id {response_id}")
        return list(self._by_response[response_id])


def locate_segments(request: str | int, knowledge: RecipeKnowledge,
                    matcher=None, evidence: EvidenceIndex | None = None) -> list[SegmentRef]:
    """Resolve a replay request to sentence-snapped segments.

    A response id returns that response's evidence verbatim. Free text is
    scored against every sentence (lexical overlap by default); the result
    is the contiguous run of positive-scoring sentences around the best
    one. Nothing at or above the floor score raises NoSegmentFound.
    """
    if isinstance(request, int):
        if evidence is None:
            raise NoSegmentFound("no evidence index available")
        return evidence.lookup(request)

    matcher = matcher or LexicalOverlapScorer()
    scores = [matcher.relevance(request, unit.text) for unit in knowledge.sentences]
    best = max(range(len(scores)), key=lambda i: (scores[i], -i))
    if scores[best] < FLOOR_SCORE:
        raise NoSegmentFound(f"nothing in the recipe matches {request!r}")
    lo = best
    while lo > 0 and scores[lo - 1] > 0:
        lo -= 1
    hi = best
    while hi + 1 < len(scores) and scores[hi + 1] > 0:
        hi += 1
    return segments_for_sentences(knowledge, range(lo, hi + 1), SegmentReason.USER_REQUEST)


def control(cmd: PlaybackCommand, pb: PlaybackState,
            segments: list[SegmentRef] | None = None) -> PlaybackState:
    """Apply a playback command; a pure function over (cmd, state, segments).

    Invalid pairs raise InvalidCommand and leave the caller's state
    untouched (PlaybackState is immutable). ``segments`` is only read by
    PLAY, which loads a fresh queue (or restarts the existing one).
    """
    if cmd is PlaybackCommand.PLAY:
        queue = tuple(segments) if segments else pb.queue
        if not queue:
            raise InvalidCommand("nothing to play")
        return PlaybackState(PlaybackStatus.PLAYING, queue, 0, queue[0].t_start)

    if cmd is PlaybackCommand.PAUSE:
        if pb.status is PlaybackStatus.STOPPED:
            raise InvalidCommand("pause while stopped")
        return replace(pb, status=PlaybackStatus.PAUSED)

    if cmd is PlaybackCommand.RESUME:
        if pb.status is PlaybackStatus.STOPPED or not pb.queue:
            raise InvalidCommand("resume with empty queue")
        return replace(pb, status=PlaybackStatus.PLAYING)

    if cmd is PlaybackCommand.REPLAY:
        if not pb.queue:
            raise InvalidCommand("replay with no last-played queue")
        segment = pb.queue[pb.current]
        return replace(pb, status=PlaybackStatus.PLAYING, position=segment.t_start)

    if cmd is PlaybackCommand.STOP:
        return PlaybackState()

    raise InvalidCommand(f"unknown command {cmd!r}")


_COMMAND_WORDS = {
    "play": PlaybackCommand.PLAY,
    "replay": PlaybackCommand.REPLAY,
    "pause": PlaybackCommand.PAUSE,
    "resume": PlaybackCommand.RESUME,
    "continue": PlaybackCommand.RESUME,
    "stop": PlaybackCommand.STOP,
}


_FILLER_WORDS = frozenset({
    "the", "a", "an", "video", "recipe", "clip", "part", "that", "this",
    "please", "it", "again", "now", "section", "segment",
})


def parse_media_command(utterance: str) -> tuple[PlaybackCommand, str | None]:
    """Split a media utterance into its command and an optional content query.

    "pause" -> (PAUSE, None). "play the video recipe" is pure filler, so it
    targets the last evidence. "Replay the part that tells me what
    ingredients I should prepare" carries content, returned with command
    and filler words stripped so stopwords cannot fake a segment match.
    """
    tokens = tokenize(utterance)
    for token in tokens:
        if token in _COMMAND_WORDS:
            cmd = _COMMAND_WORDS[token]
            content_tokens = [
                t for t in tokens
                if t != token and t not in _FILLER_WORDS and t not in _COMMAND_WORDS
            ]
            content = " ".join(content_tokens) if len(content_tokens) >= 2 else None
            return cmd, content
    return PlaybackCommand.PLAY, utterance if utterance else None
