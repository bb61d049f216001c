"""Session trace: one annotated record per dispatched stimulus."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path


@dataclass(frozen=True)
class TraceRecord:
    record_id: int
    stimulus: str  # "utterance" | "alert" | "idle"
    utterance: str | None
    classified_event: str | None  # "E1".."E10"
    from_state: str
    to_state: str
    received_at: float
    completed_at: float
    response_id: int | None = None
    ground_truth_event: str | None = None  # set by the annotation tool only
    response_correct: bool | None = None  # set by the annotation tool only
    error: str | None = None

    def to_json(self) -> str:
        return json.dumps({
            "record_id": self.record_id,
            "stimulus": self.stimulus,
            "utterance": self.utterance,
            "classified_event": self.classified_event,
            "from_state": self.from_state,
            "to_state": self.to_state,
            "received_at": self.received_at,
            "completed_at": self.completed_at,
            "response_id": self.response_id,
            "ground_truth_event": self.ground_truth_event,
            "response_correct": self.response_correct,
            "error": self.error,
        }, sort_keys=True, ensure_ascii=False)

    @staticmethod
    def from_json(line: str) -> "TraceRecord":
        d = json.loads(line)
        return TraceRecord(
            record_id=d["record_id"], stimulus=d["stimulus"],
            utterance=d.get("utterance"), classified_event=d.get("classified_event"),
            from_state=d["from_state"], to_state=d["to_state"],
            received_at=d["received_at"], completed_at=d["completed_at"],
            response_id=d.get("response_id"),
            ground_truth_event=d.get("ground_truth_event"),
            response_correct=d.get("response_correct"),
            error=d.get("error"),
        )


class TraceWriter:
    """Appends trace records to memory and, when given a path, to disk."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self.records: list[TraceRecord] = []
        self._next_id = 1

    def next_id(self) -> int:
        return self._next_id

    def append(self, **kwargs) -> TraceRecord:
        record = TraceRecord(record_id=self._next_id, **kwargs)
        self.records.append(record)
        self._next_id += 1
        if self.path is not None:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
        return record


def load_trace(path: str | Path) -> list[TraceRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(TraceRecord.from_json(line))
    return records


def save_trace(records: list[TraceRecord], path: str | Path) -> None:
    Path(path).write_text(
        "".join(r.to_json() + "\n" for r in records), encoding="utf-8")


def apply_annotations(records: list[TraceRecord], labels: dict) -> list[TraceRecord]:
    """Merge offline annotation labels into a trace.

    ``labels`` maps record_id (as int or str) to
    {"ground_truth_event": "E2", "response_correct": true}.
    """
    normalized = {int(k): v for k, v in labels.items()}
    annotated = []
    for record in records:
        label = normalized.get(record.record_id)
        if label:
            record = replace(
                record,
                ground_truth_event=label.get("ground_truth_event", record.ground_truth_event),
                response_correct=label.get("response_correct", record.response_correct),
            )
        annotated.append(record)
    return annotated
