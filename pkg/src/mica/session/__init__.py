from .config import ADAPTER_ROLES, SessionConfig, load_config
from .engine import (AdapterSet, DispatchResult, Session, adapters_from_config,
                     mock_adapters, resume_session, start_session)
from .metrics import MetricsReport, compute_metrics, is_user_query
from .trace import (TraceRecord, TraceWriter, apply_annotations, load_trace,
                    save_trace)

__all__ = [
    "ADAPTER_ROLES", "SessionConfig", "load_config",
    "AdapterSet", "DispatchResult", "Session", "adapters_from_config",
    "mock_adapters", "resume_session", "start_session",
    "MetricsReport", "compute_metrics", "is_user_query",
    "TraceRecord", "TraceWriter", "apply_annotations", "load_trace", "save_trace",
]
