"""Sentence segmentation of a word-timed transcript.

A sentence boundary falls after a word that ends with sentence-final
punctuation (. ! ?) or before a pause of at least ``gap_seconds`` between
consecutive words. Nothing else splits; the concatenated unit texts equal
the concatenated word texts.
"""

from __future__ import annotations

from ..errors import EmptyInput
from .types import SentenceUnit, TimedTranscript

DEFAULT_GAP_SECONDS = 1.5

_FINAL_PUNCTUATION = (".", "!", "?")
_CLOSERS = "\"')]}»”’"


def ends_sentence(word_text: str) -> bool:
    stripped = word_text.rstrip(_CLOSERS)
    return stripped.endswith(_FINAL_PUNCTUATION)


def segment_transcript(transcript: TimedTranscript,
                       gap_seconds: float = DEFAULT_GAP_SECONDS) -> list[SentenceUnit]:
    if not transcript.words:
        raise EmptyInput("transcript has no words")
    transcript.validate()

    units: list[SentenceUnit] = []
    current: list = []

    def flush():
        if not current:
            return
        units.append(SentenceUnit(
            index=len(units),
            text=" ".join(w.text for w in current),
            t_start=current[0].start,
            t_end=current[-1].end,
        ))
        current.clear()

    words = transcript.words
    for i, word in enumerate(words):
        current.append(word)
        next_word = words[i + 1] if i + 1 < len(words) else None
        if ends_sentence(word.text):
            flush()
        elif next_word is not None and next_word.start - word.end >= gap_seconds:
            flush()
    flush()
    return units
