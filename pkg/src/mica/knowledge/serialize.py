"""Canonical serialization of RecipeKnowledge.

The on-disk form is UTF-8 JSON with sorted keys, two-space indentation and
a trailing newline, so identical knowledge always produces byte-identical
files and files diff cleanly.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import SchemaViolation
from .types import Ingredient, KeyframeRef, RecipeKnowledge, SentenceUnit, Step


def knowledge_to_dict(k: RecipeKnowledge) -> dict:
    return {
        "schema_version": k.schema_version,
        "recipe_id": k.recipe_id,
        "title": k.title,
        "video_duration": k.video_duration,
        "sentences": [
            {
                "index": u.index,
                "text": u.text,
                "t_start": u.t_start,
                "t_end": u.t_end,
                "keyframes": [
                    {"timestamp": kf.timestamp, "content_hash": kf.content_hash}
                    for kf in u.keyframes
                ],
                "visual_description": u.visual_description,
                "audio_description": u.audio_description,
            }
            for u in k.sentences
        ],
        "ingredients": [
            {"name": i.name, "quantity": i.quantity, "first_mention": i.first_mention}
            for i in k.ingredients
        ],
        "steps": [
            {
                "index": s.index,
                "summary": s.summary,
                "first_sentence": s.first_sentence,
                "last_sentence": s.last_sentence,
            }
            for s in k.steps
        ],
    }


def knowledge_from_dict(data: dict) -> RecipeKnowledge:
    try:
        knowledge = RecipeKnowledge(
            recipe_id=data["recipe_id"],
            title=data["title"],
            video_duration=data["video_duration"],
            sentences=[
                SentenceUnit(
                    index=u["index"],
                    text=u["text"],
                    t_start=u["t_start"],
                    t_end=u["t_end"],
                    keyframes=[
                        KeyframeRef(kf["timestamp"], kf["content_hash"])
                        for kf in u["keyframes"]
                    ],
                    visual_description=u["visual_description"],
                    audio_description=u["audio_description"],
                )
                for u in data["sentences"]
            ],
            ingredients=[
                Ingredient(i["name"], i["quantity"], i["first_mention"])
                for i in data["ingredients"]
            ],
            steps=[
                Step(s["index"], s["summary"], s["first_sentence"], s["last_sentence"])
                for s in data["steps"]
            ],
            schema_version=data["schema_version"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaViolation(f"malformed knowledge file: {exc}") from exc
    knowledge.validate()
    return knowledge


def dumps_canonical(k: RecipeKnowledge) -> str:
    k.validate()
    return json.dumps(knowledge_to_dict(k), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def loads_canonical(text: str) -> RecipeKnowledge:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from exc
    return knowledge_from_dict(data)


def write_knowledge(k: RecipeKnowledge, path: str | Path) -> None:
    Path(path).write_text(dumps_canonical(k), encoding="utf-8")


def read_knowledge(path: str | Path) -> RecipeKnowledge:
    return loads_canonical(Path(path).read_text(encoding="utf-8"))
