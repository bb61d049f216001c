"""Scene-change detection and per-sentence keyframe assignment.

Scene detection is content-difference thresholding over per-frame
descriptors: a cut is emitted at a frame's timestamp exactly when the L1
distance between its descriptor and the previous frame's exceeds the
threshold. Deterministic and codec-free; descriptors typically are coarse
color histograms computed upstream.
"""

from __future__ import annotations

import warnings

from ..errors import EmptyInput, MalformedTranscript
from .types import FrameRecord, KeyframeRef, SceneCutList, SentenceUnit

DEFAULT_SCENE_THRESHOLD = 0.5


def content_difference(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    """L1 distance between two descriptors; missing components count in full."""
    n = max(len(a), len(b))
    pad_a = tuple(a) + (0.0,) * (n - len(a))
    pad_b = tuple(b) + (0.0,) * (n - len(b))
    return sum(abs(x - y) for x, y in zip(pad_a, pad_b))


def detect_scenes(frames: list[FrameRecord],
                  threshold: float = DEFAULT_SCENE_THRESHOLD) -> SceneCutList:
    if len(frames) < 2:
        raise EmptyInput("scene detection needs at least two frames")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    previous = frames[0]
    cuts: list[float] = []
    for frame in frames[1:]:
        if frame.timestamp <= previous.timestamp:
            raise MalformedTranscript("frame timestamps must be strictly increasing")
        if content_difference(previous.descriptor, frame.descriptor) > threshold:
            cuts.append(frame.timestamp)
        previous = frame
    return SceneCutList(cuts=cuts, threshold=threshold)


def scene_intervals(cuts: SceneCutList, duration: float) -> list[tuple[float, float]]:
    """Half-open scene intervals covering [0, duration]; the last one is closed."""
    bounds = [0.0] + [c for c in cuts.cuts if 0.0 < c < duration] + [duration]
    return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]


def _in_span(t: float, start: float, end: float, closed_end: bool) -> bool:
    if closed_end:
        return start <= t <= end
    return start <= t < end


def assign_keyframes(sentences: list[SentenceUnit], cuts: SceneCutList,
                     frames: list[FrameRecord], duration: float | None = None) -> list[SentenceUnit]:
    """Give each sentence the middle frame of every scene overlapping it.

    Sentence and scene intervals are treated as half-open so a frame sitting
    exactly on a shared boundary lands in exactly one of them; the final
    sentence and scene keep their end point.
    """
    if duration is None:
        duration = max(
            sentences[-1].t_end if sentences else 0.0,
            frames[-1].timestamp if frames else 0.0,
        )
    scenes = scene_intervals(cuts, duration)
    for si, unit in enumerate(sentences):
        unit.keyframes = []
        sentence_closed = si == len(sentences) - 1
        for sci, (scene_start, scene_end) in enumerate(scenes):
            scene_closed = sci == len(scenes) - 1
            overlap = [
                f for f in frames
                if _in_span(f.timestamp, unit.t_start, unit.t_end, sentence_closed)
                and _in_span(f.timestamp, scene_start, scene_end, scene_closed)
            ]
            if overlap:
                middle = overlap[len(overlap) // 2]
                unit.keyframes.append(KeyframeRef(middle.timestamp, middle.content_hash))
        if not unit.keyframes:
            warnings.warn(f"sentence {unit.index} has no frames in its interval")
    return sentences
