"""Exception hierarchy shared by all workbench modules.

Every error carries a stable ``code`` string so that CLI diagnostics, HTTP
responses and tests can match on it without parsing messages.
"""


class WorkbenchError(Exception):
    code = "ERROR"

    def __init__(self, detail: str = ""):
        self.detail = detail
        super().__init__(f"{self.code}: {detail}" if detail else self.code)


class SchemaError(WorkbenchError):
    """Malformed input file. ``line`` is 1-based when the source is JSONL."""

    code = "SCHEMA_ERROR"

    def __init__(self, detail: str = "", line: int | None = None):
        self.line = line
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)


class DanglingRefError(WorkbenchError):
    code = "DANGLING_REF"


class DuplicateError(WorkbenchError):
    code = "DUPLICATE"


class TooManyCoreFEsError(WorkbenchError):
    code = "TOO_MANY_CORE_FES"


class UnknownFrameError(WorkbenchError):
    code = "UNKNOWN_FRAME"


class SpanMismatchError(WorkbenchError):
    code = "SPAN_MISMATCH"


class OutOfBoundsError(WorkbenchError):
    code = "OUT_OF_BOUNDS"


class EmptySpanError(WorkbenchError):
    code = "EMPTY_SPAN"


class EditAfterDeleteError(WorkbenchError):
    code = "EDIT_AFTER_DELETE"


class UnknownFEError(WorkbenchError):
    code = "UNKNOWN_FE"


class DuplicateFEError(WorkbenchError):
    code = "DUPLICATE_FE"


class NotRealizedError(WorkbenchError):
    """REMOVE_FE named an FE that currently has no realization."""

    code = "NOT_REALIZED"


class AcceptAfterModifyError(WorkbenchError):
    code = "ACCEPT_AFTER_MODIFY"


class UnmatchedTimerError(WorkbenchError):
    code = "UNMATCHED_TIMER"


class InvalidEditError(WorkbenchError):
    code = "INVALID_EDIT"


class NoAnnotatedSentencesError(WorkbenchError):
    code = "NO_ANNOTATED_SENTENCES"


class NoComparableSentencesError(WorkbenchError):
    code = "NO_COMPARABLE_SENTENCES"


class NoTimingDataError(WorkbenchError):
    code = "NO_TIMING_DATA"


class UnfinalizedASError(WorkbenchError):
    code = "UNFINALIZED_AS"


class EmptyInputError(WorkbenchError):
    code = "EMPTY_INPUT"


class LeaseInvalidError(WorkbenchError):
    code = "LEASE_INVALID"


class ValidationFailedError(WorkbenchError):
    """Wraps a review-module error rejected at the store boundary."""

    code = "VALIDATION_FAILED"

    def __init__(self, cause: WorkbenchError):
        self.cause = cause
        super().__init__(f"{cause.code}: {cause.detail}")


class CorruptLogError(WorkbenchError):
    code = "CORRUPT_LOG"


class ImportConflictError(WorkbenchError):
    """An import would replace data that live edit events depend on."""

    code = "IMPORT_CONFLICT"


class FrozenConditionError(WorkbenchError):
    code = "FROZEN_CONDITION"


class MissingDataError(WorkbenchError):
    code = "MISSING_DATA"


class BindFailureError(WorkbenchError):
    code = "BIND_FAILURE"
