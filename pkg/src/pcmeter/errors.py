"""Exception hierarchy for pcmeter.

Every exception carries a machine-readable `code`;
the CLI maps any ComplianceError to exit code 1.
"""

from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING, ClassVar

if TYPE_CHECKING:  # pragma: no cover
    from pcmeter.model import Finding


class ComplianceError(Exception):
    code: ClassVar[str] = "COMPLIANCE_ERROR"

    def __str__(self) -> str:
        return f"{self.code}: {super().__str__()}"


class MetricRangeError(ComplianceError, ValueError):
    code = "METRIC_RANGE"


class KindMismatchError(ComplianceError):
    code = "KIND_MISMATCH"


class UnknownLevelError(ComplianceError):
    code = "UNKNOWN_LEVEL"


class EmptyScaleError(ComplianceError, ValueError):
    code = "EMPTY_SCALE"


class RuleParseError(ComplianceError):
    """Rule source could not be parsed.

    Position information is taken from the underlying pyparsing exception.
    """

    code = "PARSE_ERROR"

    def __init__(
        self, message: str, line: int, column: int, expected: Iterable[str] = ()
    ) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
        self.expected = frozenset(expected)


class RuleRangeError(ComplianceError):
    code = "RANGE_ERROR"


class UnboundReferenceError(ComplianceError):
    code = "UNBOUND_REFERENCE"

    def __init__(self, name: str, kind: str = "phi") -> None:
        super().__init__(f"Reference {kind}({name}) is not bound.")
        self.name = name
        self.kind = kind


class NullMetricError(ComplianceError):
    code = "NULL_METRIC"


class NoApplicableDimensionError(ComplianceError):
    code = "NO_APPLICABLE_DIMENSION"


class MissingCutoffError(ComplianceError):
    code = "MISSING_CUTOFF"


class EmptyTraceError(ComplianceError):
    code = "EMPTY_TRACE"


class EmptyLogError(ComplianceError):
    code = "EMPTY_LOG"


class DocumentIOError(ComplianceError):
    code = "IO_ERROR"


class MalformedDocumentError(ComplianceError):
    code = "MALFORMED_DOCUMENT"

    def __init__(
        self, message: str, path: str | None = None, line: int | None = None
    ) -> None:
        location = ", ".join(
            part
            for part in (
                None if line is None else f"line {line}",
                None if path is None else f"at {path}",
            )
            if part is not None
        )
        super().__init__(f"{message} ({location})" if location else message)
        self.path = path
        self.line = line


class SpecInvalidError(ComplianceError):
    code = "SPEC_INVALID"

    def __init__(self, findings: Sequence["Finding"]) -> None:
        codes = ", ".join(sorted({finding.code for finding in findings}))
        super().__init__(f"Compliance spec has {len(findings)} error(s): {codes}")
        self.findings = tuple(findings)


class DuplicateTraceIdError(ComplianceError, ValueError):
    code = "DUPLICATE_TRACE_ID"


class UnknownTraceIdError(ComplianceError):
    code = "UNKNOWN_TRACE_ID"
