"""Stimulus-to-event classification.

The live system hands this to a language model; tests use
``KeywordClassifier``, a pure function of the priority-ordered keyword
rule table shipped in ``data/keyword_rules.v1.json``.
"""

from __future__ import annotations

import json
from importlib import resources

from ..adapters import tokenize
from ..errors import ClassificationUnavailable
from .events import EventKind

RULES_VERSION = "v1"

_BY_CODE = {e.value: e for e in EventKind}


def load_keyword_rules() -> dict:
    text = resources.files("mica.dialogue").joinpath(
        f"data/keyword_rules.{RULES_VERSION}.json").read_text(encoding="utf-8")
    return json.loads(text)


def _contains_phrase(tokens: list[str], phrase: str) -> bool:
    needle = tokenize(phrase)
    if not needle:
        return False
    span = len(needle)
    return any(tokens[i:i + span] == needle for i in range(len(tokens) - span + 1))


class KeywordClassifier:
    """Rule-table mock of the event classifier."""

    def __init__(self, rules: dict | None = None):
        table = rules or load_keyword_rules()
        self.rules = [(r["event"], list(r["keywords"])) for r in table["rules"]]
        self.default = table["default"]

    def classify(self, utterance: str | None, observation_summary: str | None,
                 state: str) -> str:
        if not utterance:
            return ""
        tokens = tokenize(utterance)
        for event_code, keywords in self.rules:
            if any(_contains_phrase(tokens, kw) for kw in keywords):
                return event_code
        return self.default


def classify_event(utterance: str | None, observation_summary: str | None,
                   state, classifier, *, judgment=None) -> EventKind | None:
    """Classify one stimulus into an event kind.

    Alert-bearing judgments short-circuit (no model involvement): missed
    steps force E5, an incorrectly executed step forces E6. An utterance
    goes through the classifier adapter; E5/E6 can never come back from an
    utterance alone and are coerced to the generic query event. Healthy
    observations without an utterance produce no event.
    """
    if utterance is None and judgment is None and observation_summary is None:
        raise ValueError("classify_event needs an utterance or an observation")

    if utterance is None:
        if judgment is not None and judgment.missed_steps:
            return EventKind.E5_MISSED_STEP
        if judgment is not None and judgment.relevant and judgment.correct is False:
            return EventKind.E6_INCORRECT_STEP
        return None

    try:
        code = classifier.classify(utterance, observation_summary, state.value)
    except Exception as exc:
        raise ClassificationUnavailable(str(exc)) from exc
    kind = _BY_CODE.get(code)
    if kind is None:
        raise ClassificationUnavailable(f"classifier returned unknown event {code!r}")
    if kind in (EventKind.E5_MISSED_STEP, EventKind.E6_INCORRECT_STEP):
        return EventKind.E4_GENERAL_VISUAL_QUERY
    return kind


def parse_skip_declaration(utterance: str) -> int | None:
    """Detect "skip step N" declarations; returns the step index or None.

    Skips are a side channel, not part of the event alphabet: they update
    the progress tracker so the monitor stops alerting on the skipped step.
    """
    tokens = tokenize(utterance)
    for i, token in enumerate(tokens):
        if token in ("skip", "skipping", "skipped"):
            rest = tokens[i + 1:]
            for j, candidate in enumerate(rest):
                if candidate.isdigit() and (j == 0 or rest[j - 1] == "step"):
                    return int(candidate)
    return None
