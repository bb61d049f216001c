"""Visual and audio description of sentence units via a describer adapter."""

from __future__ import annotations

from ..errors import DescriberUnavailable, EmptyInput
from .types import SentenceUnit


def describe_visual(unit: SentenceUnit, describer) -> str:
    """Describe a unit's keyframes in one adapter call; returns the text verbatim."""
    if not unit.keyframes:
        raise EmptyInput(f"sentence {unit.index} has no keyframes to describe")
    payload = {
        "keyframes": [
            {"timestamp": kf.timestamp, "content_hash": kf.content_hash}
            for kf in unit.keyframes
        ],
        "text": unit.text,
    }
    try:
        description = describer.describe("visual", payload)
    except Exception as exc:
        raise DescriberUnavailable(str(exc)) from exc
    if not description:
        raise DescriberUnavailable("describer returned an empty visual description")
    return description


def describe_audio(unit: SentenceUnit, samples: list[float], describer,
                   rms_threshold: float = 0.05) -> str:
    """Describe the environmental sound in the unit's audio window."""
    payload = {
        "samples": list(samples),
        "threshold": rms_threshold,
        "t_start": unit.t_start,
        "t_end": unit.t_end,
    }
    try:
        description = describer.describe("audio", payload)
    except Exception as exc:
        raise DescriberUnavailable(str(exc)) from exc
    if not description:
        raise DescriberUnavailable("describer returned an empty audio description")
    return description
