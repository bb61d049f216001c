from .events import (ALERT_EVENTS, QUERY_EVENTS, REJECTED, UTTERANCE_EVENTS,
                     DialogueState, EventKind, InteractionEvent, Rejected,
                     ResetReason)
from .transitions import (TABLE_VERSION, format_table, handle_idle,
                          load_fixture_table, transition)
from .classify import (KeywordClassifier, classify_event, load_keyword_rules,
                       parse_skip_declaration)
from .templates import load_template, render_prompt, template_id
from .respond import APOLOGY_TEXT, ResponseEnvelope, render_response

__all__ = [
    "ALERT_EVENTS", "QUERY_EVENTS", "REJECTED", "UTTERANCE_EVENTS",
    "DialogueState", "EventKind", "InteractionEvent", "Rejected", "ResetReason",
    "TABLE_VERSION", "format_table", "handle_idle", "load_fixture_table",
    "transition", "KeywordClassifier", "classify_event", "load_keyword_rules",
    "parse_skip_declaration", "load_template", "render_prompt", "template_id",
    "APOLOGY_TEXT", "ResponseEnvelope", "render_response",
]
