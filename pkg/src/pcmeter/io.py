"""Loading of spec and log documents and emission of reports.

All files are UTF-8 with LF line endings.
"""

import csv
from collections.abc import Iterable, Iterator
import datetime
import io
import json
import math
from os import PathLike
from pathlib import Path
import re
from typing import Any

from pydantic import ValidationError

from pcmeter.errors import (
    DocumentIOError,
    MalformedDocumentError,
    RuleParseError,
    RuleRangeError,
    SpecInvalidError,
)
from pcmeter.metrics import ProcessResult
from pcmeter.model import (
    AggregatorChoice,
    AttributeData,
    AttributeSpec,
    AttributeValue,
    ComplianceSpec,
    CutoffThreshold,
    Level,
    ProcessLog,
    Quantity,
    TaskEvent,
    Trace,
)
from pcmeter.projection import (
    Constant,
    NumericBands,
    ProjectionFn,
    RuleRef,
    default_scale_map,
    user_scale_map,
)
from pcmeter.rules import parse_rule
from pcmeter.types import LogFormat, ReportFormat, Unit
from pcmeter.utils.converters import (
    REPORT_CSV_COLUMNS,
    _convert_report,
    _convert_report_rows,
)
from pcmeter.utils.documents import (
    AggregatorField,
    AttributeDocument,
    BandsProjectionDocument,
    CategoricalProjectionDocument,
    ConstantProjectionDocument,
    LevelDocument,
    ProjectionDocument,
    QuantityDocument,
    RuleProjectionDocument,
    SpecDocument,
    TextDocument,
    TraceDocument,
)
from pcmeter.utils.logging_hooks import (
    log_log_loaded,
    log_report_written,
    log_spec_loaded,
)
from pcmeter.validation import errors_of, validate_spec

__all__ = (
    "read_spec",
    "load_spec",
    "load_log",
    "dump_log",
    "emit_report",
    "log_format_of",
    "report_format_of",
)

type StrPath = str | PathLike[str]

_DATE_PATTERN = re.compile(r"^\d{4}-\d{2}-\d{2}$")
LOG_CSV_COLUMNS: tuple[str, ...] = (
    "traceId",
    "position",
    "task",
    "attrName",
    "attrValue",
    "attrKind",
)
_NUMERIC_KINDS: dict[str, Unit] = {
    "number": "none",
    "days": "days",
    "currency": "currency",
    "percent": "percent",
}


def _read_text(path: StrPath) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DocumentIOError(f"Cannot read '{path}': {exc}") from exc


def _write_text(path: StrPath, text: str) -> int:
    data = text.encode("utf-8")
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise DocumentIOError(f"Cannot write '{path}': {exc}") from exc
    return len(data)


def _json_path(loc: Iterable[int | str]) -> str:
    path = "$"
    previous: int | str | None = None
    for part in loc:
        match part:
            case int():
                path += f"[{part}]"
            case str() if previous == "projection":
                # discriminator tag of the projection union
                pass
            case _:
                path += f".{part}"
        previous = part
    return path


def _malformed(
    exc: ValidationError, line: int | None = None
) -> MalformedDocumentError:
    error = exc.errors(include_url=False)[0]
    return MalformedDocumentError(error["msg"], path=_json_path(error["loc"]), line=line)


def _aggregator(field: AggregatorField) -> AggregatorChoice:
    match field:
        case str():
            return AggregatorChoice(kind=field)
        case _:
            return AggregatorChoice(kind=field.kind, rule_name=field.rule)


def _projection(document: ProjectionDocument | None, path: str) -> ProjectionFn | None:
    match document:
        case None:
            return None
        case BandsProjectionDocument(direction=direction, bands=bands, relative_to=relative_to):
            open_bound = math.inf if direction == "lower-is-better" else -math.inf
            return NumericBands(
                direction=direction,
                bands=tuple(
                    (open_bound if bound is None else bound, score) for bound, score in bands
                ),
                relative_to=relative_to,
            )
        case CategoricalProjectionDocument(scale=scale, scores=None):
            try:
                return default_scale_map(scale)
            except ValueError as exc:
                raise MalformedDocumentError(str(exc), path=f"{path}.scale") from exc
        case CategoricalProjectionDocument(scale=scale, scores=scores):
            try:
                return user_scale_map(scale, scores)
            except ValueError as exc:
                raise MalformedDocumentError(str(exc), path=f"{path}.scale") from exc
        case RuleProjectionDocument(rule=rule):
            return RuleRef(rule_name=rule)
        case ConstantProjectionDocument(score=score):
            return Constant(score=score)
        case _:  # pragma: no cover
            assert False, "This should never happen."


def _attribute_spec(document: AttributeDocument, path: str) -> AttributeSpec:
    match document.cutoff, document.threshold:
        case None, None:
            cutoff_override = None
        case float() as cutoff, float() as threshold:
            cutoff_override = CutoffThreshold(cutoff, threshold)
        case _:
            raise MalformedDocumentError(
                "Attribute cutoff and threshold must be given together.", path=path
            )

    return AttributeSpec(
        task_selector=document.task,
        attribute_name=document.name,
        dimension=document.dimension,
        projection=_projection(document.projection, f"{path}.projection"),
        weight=document.weight,
        cutoff_override=cutoff_override,
        meta=document.meta,
    )


def _spec_from_document(document: SpecDocument) -> ComplianceSpec:
    rules = {}
    for name, source in document.rules.items():
        try:
            rules[name] = parse_rule(source)
        except (RuleParseError, RuleRangeError) as exc:
            raise MalformedDocumentError(str(exc), path=f"$.rules.{name}") from exc

    try:
        return ComplianceSpec(
            spec_id=document.spec_id,
            attribute_specs=tuple(
                _attribute_spec(attribute, f"$.attributes[{i}]")
                for i, attribute in enumerate(document.attributes)
            ),
            dimension_defaults={
                name: CutoffThreshold(dimension.cutoff, dimension.threshold)
                for name, dimension in document.dimensions.items()
            },
            attribute_aggregator=_aggregator(document.aggregators.attribute),
            dimension_aggregator=_aggregator(document.aggregators.dimension),
            trace_aggregator=_aggregator(document.aggregators.trace),
            rules=rules,
            dimension_weights={
                name: dimension.weight
                for name, dimension in document.dimensions.items()
                if dimension.weight is not None
            },
        )
    except MalformedDocumentError:
        raise
    except ValueError as exc:
        raise MalformedDocumentError(str(exc)) from exc


def read_spec(path: StrPath) -> ComplianceSpec:
    """Parse a spec document without validating it."""
    text = _read_text(path)
    try:
        document = SpecDocument.model_validate_json(text, strict=True)
    except ValidationError as exc:
        raise _malformed(exc) from exc
    return _spec_from_document(document)


def load_spec(path: StrPath) -> ComplianceSpec:
    """Parse and validate a spec document.

    Validation findings of severity error abort the load with SpecInvalidError.
    """
    spec = read_spec(path)
    if errors := errors_of(validate_spec(spec)):
        raise SpecInvalidError(errors)
    log_spec_loaded(spec, path)
    return spec


def log_format_of(path: StrPath) -> LogFormat:
    return "csv" if Path(path).suffix.lower() == ".csv" else "jsonl"


def report_format_of(path: StrPath) -> ReportFormat:
    return "csv" if Path(path).suffix.lower() == ".csv" else "json"


def _text_value(raw: str) -> AttributeData:
    if _DATE_PATTERN.match(raw):
        return datetime.date.fromisoformat(raw)
    return raw


def _attribute_from_document(
    name: str, raw: float | str | LevelDocument | QuantityDocument | TextDocument
) -> AttributeValue:
    match raw:
        case int() | float():
            value: AttributeData = Quantity(amount=float(raw))
        case str():
            value = _text_value(raw)
        case LevelDocument(level=level):
            value = Level(label=level)
        case QuantityDocument(value=amount, unit=unit):
            value = Quantity(amount=float(amount), unit=unit)
        case TextDocument(text=text):
            value = text
        case _:  # pragma: no cover
            assert False, "This should never happen."
    return AttributeValue(name=name, value=value)


def _trace_from_document(document: TraceDocument) -> Trace:
    return Trace.from_tasks(
        document.trace_id,
        (
            (
                event.task,
                [_attribute_from_document(name, raw) for name, raw in event.attrs.items()],
            )
            for event in document.events
        ),
    )


def _load_jsonl(text: str) -> Iterator[Trace]:
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            document = TraceDocument.model_validate_json(line, strict=True)
            yield _trace_from_document(document)
        except ValidationError as exc:
            raise _malformed(exc, line=lineno) from exc
        except ValueError as exc:
            raise MalformedDocumentError(str(exc), line=lineno) from exc


def _csv_value(raw: str, kind: str) -> AttributeData:
    match kind:
        case "number" | "days" | "currency" | "percent":
            return Quantity(amount=float(raw), unit=_NUMERIC_KINDS[kind])
        case "level":
            return Level(label=raw)
        case "date":
            return datetime.date.fromisoformat(raw)
        case "text":
            return raw
        case _:
            raise ValueError(f"Unknown attribute kind '{kind}'.")


def _load_csv(text: str) -> Iterator[Trace]:
    reader = csv.DictReader(io.StringIO(text, newline=""))
    missing = set(LOG_CSV_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise MalformedDocumentError(f"Missing CSV columns: {sorted(missing)}", line=1)

    # trace id -> position -> (task, attributes)
    traces: dict[str, dict[int, tuple[str, list[AttributeValue]]]] = {}
    for row in reader:
        lineno = reader.line_num
        try:
            trace_id, task = row["traceId"], row["task"]
            position = int(row["position"])
            events = traces.setdefault(trace_id, {})
            event_task, attributes = events.setdefault(position, (task, []))
            if event_task != task:
                raise ValueError(
                    f"Position {position} of trace '{trace_id}' has tasks "
                    f"'{event_task}' and '{task}'."
                )
            if row["attrName"]:
                attributes.append(
                    AttributeValue(
                        name=row["attrName"],
                        value=_csv_value(row["attrValue"], row["attrKind"]),
                    )
                )
        except ValueError as exc:
            raise MalformedDocumentError(str(exc), line=lineno) from exc

    for trace_id, events in traces.items():
        try:
            yield Trace(
                trace_id=trace_id,
                events=tuple(
                    TaskEvent(task_id=task, position=position, attributes=tuple(attributes))
                    for position, (task, attributes) in sorted(events.items())
                ),
            )
        except ValueError as exc:
            raise MalformedDocumentError(str(exc), path=f"traceId={trace_id}") from exc


def load_log(
    path: StrPath,
    format: LogFormat | None = None,
    process_id: str | None = None,
) -> ProcessLog:
    """Load a process log from JSON Lines or CSV.

    The process id defaults to the file stem; the format to the file suffix.
    """
    log_format = format or log_format_of(path)
    text = _read_text(path)

    match log_format:
        case "jsonl":
            traces = tuple(_load_jsonl(text))
        case "csv":
            traces = tuple(_load_csv(text))
        case _:
            raise ValueError(f"Unsupported log format '{log_format}'.")

    log = ProcessLog(process_id=process_id or Path(path).stem, traces=traces)
    log_log_loaded(log, path, log_format)
    return log


def _encode_value(value: AttributeData) -> Any:
    match value:
        case Quantity(amount=amount, unit="none"):
            return amount
        case Quantity(amount=amount, unit=unit):
            return {"value": amount, "unit": unit}
        case Level(label=label):
            return {"level": label}
        case datetime.date():
            return value.isoformat()
        case str() if _DATE_PATTERN.match(value):
            return {"text": value}
        case str():
            return value
        case _:  # pragma: no cover
            assert False, "This should never happen."


def _csv_encode_value(value: AttributeData) -> tuple[str, str]:
    match value:
        case Quantity(amount=amount, unit=unit):
            kind = next(k for k, u in _NUMERIC_KINDS.items() if u == unit)
            return repr(float(amount)), kind
        case Level(label=label):
            return label, "level"
        case datetime.date():
            return value.isoformat(), "date"
        case str():
            return value, "text"
        case _:  # pragma: no cover
            assert False, "This should never happen."


def _dump_jsonl(log: ProcessLog) -> str:
    lines = (
        json.dumps(
            {
                "traceId": trace.trace_id,
                "events": [
                    {
                        "task": event.task_id,
                        "attrs": {a.name: _encode_value(a.value) for a in event.attributes},
                    }
                    for event in trace.events
                ],
            },
            ensure_ascii=False,
        )
        for trace in log.traces
    )
    return "".join(f"{line}\n" for line in lines)


def _dump_csv(log: ProcessLog) -> str:
    buffer = io.StringIO(newline="")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(LOG_CSV_COLUMNS)
    for trace in log.traces:
        for event in trace.events:
            if not event.attributes:
                writer.writerow([trace.trace_id, event.position, event.task_id, "", "", ""])
            for attribute in event.attributes:
                writer.writerow(
                    [
                        trace.trace_id,
                        event.position,
                        event.task_id,
                        attribute.name,
                        *_csv_encode_value(attribute.value),
                    ]
                )
    return buffer.getvalue()


def dump_log(log: ProcessLog, path: StrPath, format: LogFormat | None = None) -> int:
    """Write a process log; returns the number of bytes written."""
    match format or log_format_of(path):
        case "jsonl":
            return _write_text(path, _dump_jsonl(log))
        case "csv":
            return _write_text(path, _dump_csv(log))
        case other:
            raise ValueError(f"Unsupported log format '{other}'.")


def render_report(result: ProcessResult, format: ReportFormat = "json") -> str:
    match format:
        case "json":
            return json.dumps(_convert_report(result), indent=2, ensure_ascii=False) + "\n"
        case "csv":
            buffer = io.StringIO(newline="")
            writer = csv.DictWriter(
                buffer, fieldnames=REPORT_CSV_COLUMNS, lineterminator="\n"
            )
            writer.writeheader()
            writer.writerows(_convert_report_rows(result))
            return buffer.getvalue()
        case other:
            raise ValueError(f"Unsupported report format '{other}'.")


def emit_report(
    result: ProcessResult, path: StrPath, format: ReportFormat | None = None
) -> int:
    """Write the report of a ProcessResult; returns the number of bytes written."""
    report_format = format or report_format_of(path)
    size = _write_text(path, render_report(result, report_format))
    log_report_written(path, report_format, size)
    return size
