"""End-to-end distillation of video inputs into a RecipeKnowledge file."""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DescriberUnavailable, EmptyInput, SchemaViolation
from .describe import describe_audio, describe_visual
from .manifest import audio_window
from .scenes import DEFAULT_SCENE_THRESHOLD, assign_keyframes, detect_scenes
from .segment import DEFAULT_GAP_SECONDS, segment_transcript
from .serialize import write_knowledge
from .types import (FrameRecord, Ingredient, RecipeKnowledge, SceneCutList,
                    SentenceUnit, Step, TimedTranscript)


@dataclass
class PipelineResult:
    knowledge: RecipeKnowledge
    warnings: list[str] = field(default_factory=list)


def compile_knowledge(units: list[SentenceUnit], ingredients: list[Ingredient],
                      steps: list[Step], *, recipe_id: str, title: str,
                      video_duration: float) -> RecipeKnowledge:
    knowledge = RecipeKnowledge(
        recipe_id=recipe_id,
        title=title,
        video_duration=video_duration,
        sentences=units,
        ingredients=ingredients,
        steps=steps,
    )
    knowledge.validate()
    return knowledge


def parse_structure_reply(reply: str, sentence_count: int) -> tuple[list[Step], list[Ingredient]]:
    """Parse the describer's structure reply into step and ingredient lists."""
    try:
        data = json.loads(reply)
        steps = [
            Step(index=i, summary=s["summary"],
                 first_sentence=int(s["first"]), last_sentence=int(s["last"]))
            for i, s in enumerate(data["steps"])
        ]
        ingredients = [
            Ingredient(name=i["name"], quantity=i.get("quantity", ""),
                       first_mention=int(i.get("first_mention", 0)))
            for i in data.get("ingredients", [])
        ]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"unparseable structure reply: {exc}") from exc
    for step in steps:
        if not 0 <= step.first_sentence <= step.last_sentence < sentence_count:
            raise SchemaViolation(f"structure reply step {step.index} out of range")
    return steps, ingredients


def load_structure_file(path: str | Path, sentence_count: int) -> tuple[list[Step], list[Ingredient]]:
    """Hand-authored override for steps and ingredients, same JSON shape."""
    return parse_structure_reply(Path(path).read_text(encoding="utf-8"), sentence_count)


def distill(transcript: TimedTranscript, frames: list[FrameRecord],
            audio: tuple[list[float], int] | None, describer, *,
            recipe_id: str, title: str = "",
            scene_threshold: float = DEFAULT_SCENE_THRESHOLD,
            gap_seconds: float = DEFAULT_GAP_SECONDS,
            structure_file: str | Path | None = None) -> PipelineResult:
    """Run segmentation, scene detection, description and compilation.

    Describer failures degrade to empty descriptions plus a warning so a
    partial knowledge file still comes out usable. Per-unit describer calls
    run in unit-index order, keeping the output order-deterministic.
    """
    pipeline_warnings: list[str] = []
    units = segment_transcript(transcript, gap_seconds=gap_seconds)
    video_duration = max(
        transcript.words[-1].end,
        frames[-1].timestamp if frames else 0.0,
    )

    try:
        cuts = detect_scenes(frames, threshold=scene_threshold)
    except EmptyInput:
        cuts = SceneCutList(cuts=[], threshold=scene_threshold)
        pipeline_warnings.append("fewer than two frames; scene detection skipped")

    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        assign_keyframes(units, cuts, frames, duration=video_duration)
    pipeline_warnings.extend(str(w.message) for w in caught)

    for unit in units:
        if not unit.keyframes:
            pipeline_warnings.append(f"sentence {unit.index}: no keyframes, visual description skipped")
            continue
        try:
            unit.visual_description = describe_visual(unit, describer)
        except DescriberUnavailable as exc:
            unit.visual_description = ""
            pipeline_warnings.append(f"sentence {unit.index}: visual describer failed ({exc})")

    if audio is not None:
        samples, rate = audio
        for unit in units:
            window = audio_window(samples, rate, unit.t_start, unit.t_end)
            try:
                unit.audio_description = describe_audio(unit, window, describer)
            except DescriberUnavailable as exc:
                unit.audio_description = ""
                pipeline_warnings.append(f"sentence {unit.index}: audio describer failed ({exc})")

    if structure_file is not None:
        steps, ingredients = load_structure_file(structure_file, len(units))
    else:
        try:
            reply = describer.describe("structure", {
                "transcript": " ".join(w.text for w in transcript.words),
                "sentence_count": len(units),
            })
            steps, ingredients = parse_structure_reply(reply, len(units))
        except Exception as exc:
            steps = [Step(0, "follow the recipe", 0, len(units) - 1)]
            ingredients = []
            pipeline_warnings.append(f"structure derivation failed, single-step fallback ({exc})")

    knowledge = compile_knowledge(units, ingredients, steps,
                                  recipe_id=recipe_id, title=title or recipe_id,
                                  video_duration=video_duration)
    return PipelineResult(knowledge=knowledge, warnings=pipeline_warnings)


def write_result(result: PipelineResult, out_path: str | Path) -> None:
    """Write the canonical knowledge file plus its warnings sidecar."""
    out = Path(out_path)
    write_knowledge(result.knowledge, out)
    sidecar = out.with_suffix(out.suffix + ".warnings")
    sidecar.write_text("".join(f"{w}\n" for w in result.warnings), encoding="utf-8")
