"""Scenario script files: a timed stimulus list plus checkable expectations.

Plain-text format, one directive per line, ``#`` comments allowed:

    recipe: pasta.recipe.json
    at 1.0 utterance: What's my next step?
    at 2.5 scene: action=filling a pot with water; step=1; items=pot,water; sounds=running water
    at 8.0 skip: 3
    expect by 1.5: event E2
    expect by 1.5: state S2
    expect by 1.5: response-contains boil
    expect by 7.0: alert E5
    expect by 30.0: no-alert E6
    expect by 9.0: playback-status playing

Expectation checks: ``event <E#>``, ``no-event <E#>``, ``state <S#>``,
``alert <E#>``, ``no-alert <E#>``, ``response-contains <text>``,
``playback-status <stopped|playing|paused>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ScriptError

STIMULUS_KINDS = ("utterance", "scene", "skip")
CHECK_KINDS = ("event", "no-event", "state", "alert", "no-alert",
               "response-contains", "playback-status")

_AT_RE = re.compile(r"^at\s+([0-9.]+)\s+(utterance|scene|skip):\s*(.*)$")
_EXPECT_RE = re.compile(r"^expect\s+by\s+([0-9.]+):\s*(\S+)\s*(.*)$")


@dataclass(frozen=True)
class TimelineEntry:
    at: float
    kind: str  # utterance | scene | skip
    payload: object  # str for utterance, dict for scene, int for skip


@dataclass(frozen=True)
class Expectation:
    by: float
    check: str
    argument: str

    def label(self) -> str:
        return f"by {self.by}: {self.check} {self.argument}".strip()


@dataclass
class ScenarioScript:
    name: str
    recipe_path: Path
    timeline: list[TimelineEntry] = field(default_factory=list)
    expectations: list[Expectation] = field(default_factory=list)

    def end_time(self) -> float:
        times = [e.at for e in self.timeline] + [e.by for e in self.expectations]
        return max(times) if times else 0.0


def _parse_scene_payload(raw: str, line_no: int) -> dict:
    payload: dict = {}
    for part in raw.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ScriptError(f"line {line_no}: scene field without '=': {part!r}")
        key = key.strip()
        value = value.strip()
        if key == "step":
            payload[key] = int(value)
        elif key in ("items", "sounds"):
            payload[key] = [x.strip() for x in value.split(",") if x.strip()]
        else:
            payload[key] = value
    return payload


def parse_script(path: str | Path) -> ScenarioScript:
    path = Path(path)
    if not path.exists():
        raise ScriptError(f"scenario script not found: {path}")
    script = ScenarioScript(name=path.stem, recipe_path=path)
    recipe: Path | None = None

    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("recipe:"):
            recipe = (path.parent / line.split(":", 1)[1].strip()).resolve()
            continue
        m = _AT_RE.match(line)
        if m:
            at, kind, rest = float(m.group(1)), m.group(2), m.group(3)
            if kind == "utterance":
                if not rest:
                    raise ScriptError(f"line {line_no}: empty utterance")
                payload: object = rest
            elif kind == "scene":
                payload = _parse_scene_payload(rest, line_no)
            else:
                try:
                    payload = int(rest)
                except ValueError as exc:
                    raise ScriptError(f"line {line_no}: skip needs a step index") from exc
            script.timeline.append(TimelineEntry(at=at, kind=kind, payload=payload))
            continue
        m = _EXPECT_RE.match(line)
        if m:
            by, check, argument = float(m.group(1)), m.group(2), m.group(3).strip()
            if check not in CHECK_KINDS:
                raise ScriptError(f"line {line_no}: unknown check {check!r}")
            if not argument:
                raise ScriptError(f"line {line_no}: check {check!r} needs an argument")
            script.expectations.append(Expectation(by=by, check=check, argument=argument))
            continue
        raise ScriptError(f"line {line_no}: cannot parse {line!r}")

    if recipe is None:
        raise ScriptError(f"{path}: missing 'recipe:' directive")
    if not recipe.exists():
        raise ScriptError(f"{path}: recipe fixture not found: {recipe}")
    script.recipe_path = recipe
    script.timeline.sort(key=lambda e: (e.at, 0 if e.kind != "scene" else 1))
    script.expectations.sort(key=lambda e: e.by)
    return script
