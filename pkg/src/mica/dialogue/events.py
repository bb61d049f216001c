"""State and event alphabet of the interaction machine."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class DialogueState(Enum):
    S0_IDLE = "S0"
    S1_FOOD_STATE = "S1"
    S2_STEP_GUIDE = "S2"
    S3_PROBLEM_SOLVING = "S3"
    S4_GENERAL_VISUAL = "S4"
    S5_CORRECTION_REVIEW = "S5"
    S6_DETAIL_ELABORATION = "S6"


class EventKind(Enum):
    E1_FOOD_STATE_QUERY = "E1"
    E2_STEP_QUERY = "E2"
    E3_PROBLEM_QUERY = "E3"
    E4_GENERAL_VISUAL_QUERY = "E4"
    E5_MISSED_STEP = "E5"
    E6_INCORRECT_STEP = "E6"
    E7_FOLLOW_UP = "E7"
    E8_FLAG_RESPONSE_WRONG = "E8"
    E9_RESET = "E9"
    E10_MEDIA_CONTROL = "E10"


#: Events raised by the user's voice, carrying an utterance id.
UTTERANCE_EVENTS = frozenset({
    EventKind.E1_FOOD_STATE_QUERY, EventKind.E2_STEP_QUERY,
    EventKind.E3_PROBLEM_QUERY, EventKind.E4_GENERAL_VISUAL_QUERY,
    EventKind.E7_FOLLOW_UP, EventKind.E8_FLAG_RESPONSE_WRONG,
    EventKind.E10_MEDIA_CONTROL,
})

#: Events raised by the proactive monitor, carrying a judgment id.
ALERT_EVENTS = frozenset({EventKind.E5_MISSED_STEP, EventKind.E6_INCORRECT_STEP})

#: Fresh top-level query events that select one of the four response states.
QUERY_EVENTS = frozenset({
    EventKind.E1_FOOD_STATE_QUERY, EventKind.E2_STEP_QUERY,
    EventKind.E3_PROBLEM_QUERY, EventKind.E4_GENERAL_VISUAL_QUERY,
})


class ResetReason(Enum):
    SATISFIED = "satisfied"
    IDLE_TIMEOUT = "idle_timeout"


@dataclass(frozen=True)
class InteractionEvent:
    """One classified stimulus: the event kind plus its provenance payload."""

    kind: EventKind
    utterance_id: int | None = None
    judgment_id: int | None = None
    reason: ResetReason | None = None

    def __post_init__(self):
        if self.kind in ALERT_EVENTS and self.judgment_id is None:
            raise ValueError(f"{self.kind.value} requires a judgment id")
        if self.kind in UTTERANCE_EVENTS and self.utterance_id is None:
            raise ValueError(f"{self.kind.value} requires an utterance id")
        if self.kind is EventKind.E9_RESET and self.reason is None:
            raise ValueError("E9 requires a reset reason")


class Rejected:
    """Transition outcome for an event the current state does not accept."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Rejected"


REJECTED = Rejected()
