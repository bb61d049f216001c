from .script import (CHECK_KINDS, Expectation, ScenarioScript, TimelineEntry,
                     parse_script)
from .runner import (CheckResult, ScenarioReport, SweepCell, conformance_sweep,
                     junit_report, run_directory, run_scenario, score_trace)

__all__ = [
    "CHECK_KINDS", "Expectation", "ScenarioScript", "TimelineEntry", "parse_script",
    "CheckResult", "ScenarioReport", "SweepCell", "conformance_sweep",
    "junit_report", "run_directory", "run_scenario", "score_trace",
]
