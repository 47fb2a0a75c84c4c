"""
Exception hierarchy for the solver.

Every error carries a machine-readable `code` and a `detail` dict: the message plus
whatever context a caller needs to react (the offending entry, the step index, the
residual). The CLI prints `detail["message"]`; sweeps copy `code` into the status column.
"""
from typing import Any

from models.enums import ErrorCode


class AdialinError(Exception):
    code: ErrorCode = ErrorCode.INVALID_INPUT

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.detail: dict[str, Any] = {"message": message, **context}

    @property
    def context(self) -> dict[str, Any]:
        """`detail` without the message; safe to pass as logging `extra`."""
        return {k: v for k, v in self.detail.items() if k != "message"}

    def __str__(self) -> str:
        context = self.context
        if not context:
            return self.message
        rendered = ", ".join(f"{k}={v}" for k, v in context.items())
        return f"{self.message} ({rendered})"


class InvalidInputError(AdialinError):
    code = ErrorCode.INVALID_INPUT


class NotHermitianError(AdialinError):
    code = ErrorCode.NOT_HERMITIAN


class SingularMatrixError(AdialinError):
    """Raised where a condition number would be infinite."""
    code = ErrorCode.SINGULAR_MATRIX


class EncodingRangeError(AdialinError):
    code = ErrorCode.ENCODING_RANGE


class FormViolationError(AdialinError):
    """State does not have the real-first-half / imaginary-second-half form."""
    code = ErrorCode.FORM_VIOLATION


class ScheduleGuardError(AdialinError):
    code = ErrorCode.SCHEDULE_GUARD


class VanishingPostselectionError(AdialinError):
    code = ErrorCode.VANISHING_POSTSELECTION


class TruncationRejected(AdialinError):
    """The "modify T, dt" signal: imaginary residual above the truncation threshold."""
    code = ErrorCode.TRUNCATION_REJECTED


class SchemaMismatchError(AdialinError):
    code = ErrorCode.SCHEMA_MISMATCH
