"""Pluggable model adapters and their deterministic mocks.

Every external model the engine talks to (keyframe/audio describers, the
event classifier, the response generator, the perception agent, TTS) sits
behind one of these small contracts. Production plugs in hosted models via
``RemoteModelAdapter``; tests and the harness always use the mocks below,
which are pure functions of their inputs.
"""

from __future__ import annotations

import math
import re
from typing import Protocol


class AdapterFailure(Exception):
    """Raised by an adapter when its backing service fails."""


# ---------------------------------------------------------------------------
# contracts


class Describer(Protocol):
    """Text-out model used by the knowledge pipeline.

    ``task`` is one of "visual", "audio", "structure"; ``payload`` carries
    task-specific fields (keyframes + sentence text, audio samples, or the
    full transcript).
    """

    def describe(self, task: str, payload: dict) -> str: ...


class Classifier(Protocol):
    def classify(self, utterance: str | None, observation_summary: str | None,
                 state: str) -> str:
        """Return an event code "E1".."E10" for the stimulus."""
        ...


class Generator(Protocol):
    def generate(self, prompt: str) -> str: ...


class Perceiver(Protocol):
    def perceive(self, frame_window: list, audio_window: list, prompt_tag: str) -> str:
        """Return a structured text reply (``key: value`` lines)."""
        ...


class SpeechSynthesizer(Protocol):
    def speak(self, text: str, speed: float) -> str:
        """Deliver text as audio; returns an audio stream reference."""
        ...


class RelevanceScorer(Protocol):
    def relevance(self, query: str, text: str) -> float: ...


# ---------------------------------------------------------------------------
# lexical scoring (shared by memory retrieval and segment matching)

_WORD_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


class LexicalOverlapScorer:
    """Relevance = number of distinct query tokens present in the text."""

    def relevance(self, query: str, text: str) -> float:
        return float(len(set(tokenize(query)) & set(tokenize(text))))


# ---------------------------------------------------------------------------
# mocks


class EchoDescriber:
    """Echoes a digest of its payload; used to pin pipeline plumbing."""

    def describe(self, task: str, payload: dict) -> str:
        if task == "visual":
            return f"KF:{len(payload['keyframes'])} TXT:{payload['text']}"
        if task == "audio":
            return classify_rms(payload["samples"], payload.get("threshold", 0.05))
        if task == "structure":
            # One step spanning every sentence, no ingredients.
            n = payload["sentence_count"]
            return f'{{"steps": [{{"summary": "follow the recipe", "first": 0, "last": {n - 1}}}], "ingredients": []}}'
        raise AdapterFailure(f"unknown task {task!r}")


def classify_rms(samples: list[float], threshold: float) -> str:
    """Label an audio window by its RMS energy: quiet is silence, loud sizzles."""
    if not samples:
        return "silence"
    rms = math.sqrt(sum(x * x for x in samples) / len(samples))
    return "sizzling" if rms >= threshold else "silence"


class CannedDescriber:
    """Returns queued responses per task, in order. Raises when exhausted."""

    def __init__(self, responses: dict[str, list[str]]):
        self._responses = {task: list(items) for task, items in responses.items()}
        self.calls: list[tuple[str, dict]] = []

    def describe(self, task: str, payload: dict) -> str:
        self.calls.append((task, payload))
        queue = self._responses.get(task)
        if not queue:
            raise AdapterFailure(f"no canned response left for task {task!r}")
        return queue.pop(0)


class FailingAdapter:
    """Fails every call; stands in for any adapter in error-path tests."""

    def __init__(self, message: str = "backend down"):
        self.message = message

    def _fail(self, *args, **kwargs):
        raise AdapterFailure(self.message)

    describe = _fail
    classify = _fail
    generate = _fail
    perceive = _fail
    speak = _fail


class EchoGenerator:
    """Returns the rendered prompt verbatim."""

    def __init__(self):
        self.calls: list[str] = []

    def generate(self, prompt: str) -> str:
        self.calls.append(prompt)
        return prompt


class CannedGenerator:
    """Pops responses from a queue; falls back to a fixed default."""

    def __init__(self, queue: list[str] | None = None, default: str = "okay."):
        self.queue = list(queue or [])
        self.default = default
        self.calls: list[str] = []

    def generate(self, prompt: str) -> str:
        self.calls.append(prompt)
        return self.queue.pop(0) if self.queue else self.default


class RecordingSpeech:
    """Records every (text, speed) call instead of synthesizing audio."""

    def __init__(self):
        self.calls: list[tuple[str, float]] = []

    def speak(self, text: str, speed: float) -> str:
        self.calls.append((text, speed))
        return f"audio:{len(self.calls)}"


class ScriptedPerceiver:
    """Replays scripted scene payloads keyed by session time.

    ``timeline`` maps a time (seconds) to a payload dict with the observe
    fields (action, step, items, sounds). A tick at time t sees the latest
    payload at or before t; before the first payload the scene is empty.
    """

    def __init__(self, timeline: list[tuple[float, dict]] | None = None):
        self.timeline = sorted(timeline or [], key=lambda item: item[0])
        self._now = 0.0
        self.fail_at: set[int] = set()
        self._calls = 0

    def add(self, at: float, payload: dict) -> None:
        self.timeline.append((at, payload))
        self.timeline.sort(key=lambda item: item[0])

    def set_time(self, now: float) -> None:
        self._now = now

    def perceive(self, frame_window: list, audio_window: list, prompt_tag: str) -> str:
        self._calls += 1
        if self._calls in self.fail_at:
            raise AdapterFailure("scripted perceiver failure")
        payload: dict = {}
        for at, candidate in self.timeline:
            if at <= self._now:
                payload = candidate
        lines = [
            f"action: {payload.get('action', '')}",
            f"step: {payload.get('step', '')}",
            f"items: {', '.join(payload.get('items', []))}",
            f"sounds: {', '.join(payload.get('sounds', []))}",
        ]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# remote adapter

class RemoteModelAdapter:
    """Single-endpoint HTTP contract for any hosted model.

    Request:  POST <endpoint>  {"task": <tag>, "payload": {...}}
    Response: 200               {"text": <string>}

    The same endpoint shape serves describers, classifiers, generators and
    perceivers; the task tag tells the hosted side what is being asked.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0, client=None):
        import httpx

        self.endpoint = endpoint
        self._client = client or httpx.Client(timeout=timeout)

    def _call(self, task: str, payload: dict) -> str:
        try:
            response = self._client.post(self.endpoint, json={"task": task, "payload": payload})
            response.raise_for_status()
            return response.json()["text"]
        except Exception as exc:
            raise AdapterFailure(str(exc)) from exc

    def describe(self, task: str, payload: dict) -> str:
        return self._call(task, payload)

    def classify(self, utterance, observation_summary, state) -> str:
        return self._call("classify", {
            "utterance": utterance, "observation": observation_summary, "state": state,
        })

    def generate(self, prompt: str) -> str:
        return self._call("generate", {"prompt": prompt})

    def perceive(self, frame_window, audio_window, prompt_tag: str) -> str:
        return self._call("perceive", {
            "frames": frame_window, "audio": audio_window, "tag": prompt_tag,
        })

    def speak(self, text: str, speed: float) -> str:
        return self._call("speak", {"text": text, "speed": speed})
