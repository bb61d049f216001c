"""Engine error types, grouped by the subsystem that raises them."""


class MicaError(Exception):
    """Base class for all engine errors."""


# -- knowledge pipeline --

class EmptyInput(MicaError):
    """An operation received an input with nothing to process."""


class MalformedTranscript(MicaError):
    """Word timings are non-monotone or otherwise violate transcript invariants."""


class SchemaViolation(MicaError):
    """A knowledge file or in-memory structure breaks its schema invariants."""


class DescriberUnavailable(MicaError):
    """A describer adapter call failed; the unit is left undescribed."""


# -- dialogue / generation --

class ClassificationUnavailable(MicaError):
    """The event classifier adapter failed."""


class GenerationUnavailable(MicaError):
    """The response generator adapter failed."""


# -- memory --

class ClockViolation(MicaError):
    """A record arrived with a timestamp earlier than the last stored one."""


class BudgetTooSmall(MicaError):
    """The context budget cannot fit even the user query."""


# -- media --

class NoSegmentFound(MicaError):
    """Free-text segment lookup found nothing above the floor score."""


class InvalidCommand(MicaError):
    """A playback command is not valid in the current playback status."""


# -- session / harness --

class StartupFailure(MicaError):
    """The session could not start (bad recipe file, bad config)."""


class IncompleteAnnotation(MicaError):
    """Metrics were requested on a trace with unannotated query records."""

    def __init__(self, record_ids):
        self.record_ids = list(record_ids)
        super().__init__(f"unannotated trace records: {self.record_ids}")


class ScriptError(MicaError):
    """A scenario script failed to parse or resolve its fixtures."""
