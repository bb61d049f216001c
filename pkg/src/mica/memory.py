"""Session memory: append-only record store, retrieval, context assembly.

Every conversational turn, monitor observation, judgment, alert and media
action lands here as one MemoryRecord. Retrieval ranks records by a
recency-weighted lexical overlap score (pluggable, so an embedding scorer
can slot in later); context assembly fills a token budget in a fixed
priority order and truncates by dropping whole items, never mid-record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .adapters import LexicalOverlapScorer
from .dialogue.events import DialogueState, EventKind
from .errors import BudgetTooSmall, ClockViolation
from .knowledge.types import RecipeKnowledge, SentenceUnit

RECENCY_WEIGHT = 0.5


class RecordKind(Enum):
    UTTERANCE = "utterance"
    RESPONSE = "response"
    OBSERVATION = "observation"
    JUDGMENT = "judgment"
    ALERT = "alert"
    MEDIA_ACTION = "media_action"


@dataclass(frozen=True)
class MemoryRecord:
    record_id: int
    kind: RecordKind
    timestamp: float
    text: str
    step_index: int | None = None
    sentence_indices: tuple[int, ...] = ()
    tick_id: int | None = None
    response_id: int | None = None

    def to_json(self) -> str:
        return json.dumps({
            "record_id": self.record_id,
            "kind": self.kind.value,
            "timestamp": self.timestamp,
            "text": self.text,
            "step_index": self.step_index,
            "sentence_indices": list(self.sentence_indices),
            "tick_id": self.tick_id,
            "response_id": self.response_id,
        }, sort_keys=True, ensure_ascii=False)

    @staticmethod
    def from_json(line: str) -> "MemoryRecord":
        data = json.loads(line)
        return MemoryRecord(
            record_id=data["record_id"],
            kind=RecordKind(data["kind"]),
            timestamp=data["timestamp"],
            text=data["text"],
            step_index=data.get("step_index"),
            sentence_indices=tuple(data.get("sentence_indices", ())),
            tick_id=data.get("tick_id"),
            response_id=data.get("response_id"),
        )


class MemoryStore:
    """Append-only in-session record store with an optional stream file."""

    def __init__(self, stream_path: str | Path | None = None):
        self._records: list[MemoryRecord] = []
        self._next_id = 1
        self._stream_path = Path(stream_path) if stream_path else None
        self._scorer = LexicalOverlapScorer()

    def __len__(self) -> int:
        return len(self._records)

    def records(self) -> list[MemoryRecord]:
        return list(self._records)

    def next_record_id(self) -> int:
        return self._next_id

    def append(self, kind: RecordKind, timestamp: float, text: str, *,
               step_index: int | None = None,
               sentence_indices: tuple[int, ...] = (),
               tick_id: int | None = None,
               response_id: int | None = None) -> int:
        if self._records and timestamp < self._records[-1].timestamp:
            raise ClockViolation(
                f"timestamp {timestamp} precedes last record at {self._records[-1].timestamp}")
        if kind is RecordKind.OBSERVATION and tick_id is None:
            raise ValueError("observation records must link a tick_id")
        if kind is RecordKind.RESPONSE and response_id is None:
            raise ValueError("response records must link a response_id")
        record = MemoryRecord(
            record_id=self._next_id, kind=kind, timestamp=timestamp, text=text,
            step_index=step_index, sentence_indices=tuple(sentence_indices),
            tick_id=tick_id, response_id=response_id,
        )
        self._records.append(record)
        self._next_id += 1
        if self._stream_path is not None:
            with self._stream_path.open("a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
        return record.record_id

    def load_stream(self, path: str | Path) -> int:
        """Re-load records from a session stream file (crash recovery)."""
        count = 0
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = MemoryRecord.from_json(line)
            self._records.append(record)
            self._next_id = max(self._next_id, record.record_id + 1)
            count += 1
        return count

    def retrieve(self, query: str, k: int = 5, scorer=None) -> list[MemoryRecord]:
        """Top-k records by recency-weighted overlap; ties go to newer records."""
        if not self._records:
            return []
        if scorer is not None:
            relevance = scorer.relevance
        else:
            relevance = self._scorer.relevance
        t_min = self._records[0].timestamp
        t_max = self._records[-1].timestamp
        scored = []
        for record in self._records:
            overlap = relevance(query, record.text)
            if t_max > t_min:
                recency = (record.timestamp - t_min) / (t_max - t_min)
            else:
                recency = 0.0
            scored.append((overlap + RECENCY_WEIGHT * recency, record.record_id, record))
        scored.sort(key=lambda item: (-item[0], -item[1]))
        return [record for _, _, record in scored[:k]]

    def export(self, path: str | Path) -> None:
        Path(path).write_text(
            "".join(r.to_json() + "\n" for r in self._records), encoding="utf-8")


# ---------------------------------------------------------------------------
# context assembly


@dataclass
class ContextBundle:
    state: DialogueState
    user_query: str | None
    recent_turns: list[MemoryRecord] = field(default_factory=list)
    recent_observations: list[MemoryRecord] = field(default_factory=list)
    retrieved: list[MemoryRecord] = field(default_factory=list)
    knowledge_slices: list[SentenceUnit] = field(default_factory=list)
    alert_text: str = ""
    current_step_summary: str = ""
    budget_used: int = 0
    #: sentence indices backing the answer; unlike knowledge_slices these
    #: are not budget-bound, so evidence survives prompt truncation
    evidence_indices: list[int] = field(default_factory=list)


def token_cost(text: str) -> int:
    """Whitespace-token approximation of context size."""
    return len(text.split())


DEFAULT_TURNS = 6
DEFAULT_OBSERVATIONS = 3
DEFAULT_RETRIEVED = 5


def knowledge_slices_for_state(state: DialogueState, knowledge: RecipeKnowledge,
                               current_step: int) -> list[SentenceUnit]:
    """Which recipe sentences back each response state.

    Step guidance sees the current and next step; food-state, problem
    solving, correction and elaboration see the current step; general
    visual questions get a recipe skim (the first sentence of every step).
    """
    if state is DialogueState.S2_STEP_GUIDE:
        slices = knowledge.sentences_for_step(current_step)
        slices += knowledge.sentences_for_step(current_step + 1)
        return slices
    if state is DialogueState.S4_GENERAL_VISUAL:
        return [knowledge.sentences[s.first_sentence] for s in knowledge.steps]
    return knowledge.sentences_for_step(current_step)


def assemble_context(state: DialogueState, event: EventKind, query: str | None,
                     budget: int, store: MemoryStore, knowledge: RecipeKnowledge,
                     current_step: int = 0, *, alert_text: str = "",
                     n_turns: int = DEFAULT_TURNS,
                     n_observations: int = DEFAULT_OBSERVATIONS,
                     k_retrieved: int = DEFAULT_RETRIEVED) -> ContextBundle:
    """Fill the budget in priority order: query, turns, observations,
    retrieved records, knowledge slices.

    Inclusion walks the priority-ordered item sequence and stops at the
    first item that does not fit, so growing the budget only ever adds
    items (monotone truncation, whole items only).
    """
    query_cost = token_cost(query or "") + token_cost(alert_text)
    if budget < query_cost:
        raise BudgetTooSmall(f"budget {budget} cannot fit the query ({query_cost} tokens)")

    bundle = ContextBundle(state=state, user_query=query, alert_text=alert_text)
    step = next((s for s in knowledge.steps if s.index == current_step), None)
    if step is not None:
        bundle.current_step_summary = f"step {step.index}: {step.summary}"
    used = query_cost

    records = store.records()
    turns = [r for r in records if r.kind in (RecordKind.UTTERANCE, RecordKind.RESPONSE)]
    observations = [r for r in records if r.kind is RecordKind.OBSERVATION]
    retrieved = store.retrieve(query, k_retrieved) if query else []
    slices = knowledge_slices_for_state(state, knowledge, current_step)
    bundle.evidence_indices = [u.index for u in slices]

    # (priority class, newest-first ordering inside the recency classes)
    sequence: list[tuple[str, object]] = []
    sequence += [("turn", r) for r in reversed(turns[-n_turns:])]
    sequence += [("obs", r) for r in reversed(observations[-n_observations:])]
    sequence += [("retrieved", r) for r in retrieved]
    sequence += [("slice", u) for u in slices]

    for kind, item in sequence:
        cost = token_cost(item.text)
        if used + cost > budget:
            break
        used += cost
        if kind == "turn":
            bundle.recent_turns.insert(0, item)
        elif kind == "obs":
            bundle.recent_observations.insert(0, item)
        elif kind == "retrieved":
            bundle.retrieved.append(item)
        else:
            bundle.knowledge_slices.append(item)

    bundle.budget_used = used
    return bundle
