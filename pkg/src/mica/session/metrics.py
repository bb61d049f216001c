"""Accuracy metrics over annotated session traces.

A user query is a trace record with an utterance classified to one of
E1-E8 (media and reset commands are not queries). Event-mapping accuracy
divides correctly mapped queries by the queries excluding follow-ups
(E7/E8); response accuracy divides correct responses by all user queries.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import IncompleteAnnotation
from .trace import TraceRecord

_QUERY_EVENTS = {"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"}
_FOLLOW_UP_EVENTS = {"E7", "E8"}


@dataclass(frozen=True)
class MetricsReport:
    total_queries: int
    correct_mappings: int
    mapping_denominator: int
    mapping_accuracy: float | None
    correct_responses: int
    response_accuracy: float | None

    def as_dict(self) -> dict:
        return {
            "total_queries": self.total_queries,
            "correct_mappings": self.correct_mappings,
            "mapping_denominator": self.mapping_denominator,
            "mapping_accuracy": self.mapping_accuracy,
            "correct_responses": self.correct_responses,
            "response_accuracy": self.response_accuracy,
        }


def is_user_query(record: TraceRecord) -> bool:
    if record.stimulus != "utterance" or not record.utterance:
        return False
    event = record.ground_truth_event or record.classified_event
    return event in _QUERY_EVENTS


def compute_metrics(trace: list[TraceRecord]) -> MetricsReport:
    queries = [r for r in trace if is_user_query(r)]
    unannotated = [r.record_id for r in queries
                   if r.ground_truth_event is None or r.response_correct is None]
    if unannotated:
        raise IncompleteAnnotation(unannotated)

    mapped = [r for r in queries if r.ground_truth_event not in _FOLLOW_UP_EVENTS]
    correct_mappings = sum(1 for r in mapped if r.classified_event == r.ground_truth_event)
    correct_responses = sum(1 for r in queries if r.response_correct is True)

    total = len(queries)
    denominator = len(mapped)
    return MetricsReport(
        total_queries=total,
        correct_mappings=correct_mappings,
        mapping_denominator=denominator,
        mapping_accuracy=correct_mappings / denominator if denominator else None,
        correct_responses=correct_responses,
        response_accuracy=correct_responses / total if total else None,
    )
