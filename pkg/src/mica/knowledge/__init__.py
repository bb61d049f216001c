from .types import (FrameRecord, Ingredient, KeyframeRef, RecipeKnowledge,
                    SceneCutList, SentenceUnit, Step, TimedTranscript,
                    TranscriptWord)
from .segment import segment_transcript
from .scenes import assign_keyframes, content_difference, detect_scenes, scene_intervals
from .describe import describe_audio, describe_visual
from .serialize import (dumps_canonical, loads_canonical, read_knowledge,
                        write_knowledge)
from .pipeline import PipelineResult, compile_knowledge, distill, write_result

__all__ = [
    "FrameRecord", "Ingredient", "KeyframeRef", "RecipeKnowledge",
    "SceneCutList", "SentenceUnit", "Step", "TimedTranscript", "TranscriptWord",
    "segment_transcript", "assign_keyframes", "content_difference",
    "detect_scenes", "scene_intervals", "describe_audio", "describe_visual",
    "dumps_canonical", "loads_canonical", "read_knowledge", "write_knowledge",
    "PipelineResult", "compile_knowledge", "distill", "write_result",
]
