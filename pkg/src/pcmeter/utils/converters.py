"""Conversions of evaluation results into report documents and explanations."""

from collections.abc import Iterator
from typing import Any

from pcmeter.metrics import DimensionMetric, ProcessResult, TaskResult, TraceResult
from pcmeter.types import ComplianceClass, MetricValue
from pcmeter.utils.utils import format_number

REPORT_CSV_COLUMNS: tuple[str, ...] = (
    "specId",
    "processId",
    "pMeasure",
    "traceId",
    "tauMeasure",
    "traceClass",
    "position",
    "task",
    "tMeasure",
    "taskClass",
    "dimension",
    "value",
    "class",
    "contributing",
)


def _number(value: MetricValue | float) -> int | float | None:
    return None if value is None else format_number(value)


def _class(compliance_class: ComplianceClass | None) -> str | None:
    return None if compliance_class is None else compliance_class.value


def _convert_dimension(dim: DimensionMetric) -> dict[str, Any]:
    return {
        "dimension": dim.dimension,
        "value": _number(dim.value),
        "class": _class(dim.compliance_class),
        "contributing": [
            {"attribute": name, "score": _number(score)} for name, score in dim.contributing
        ],
    }


def _convert_task(task: TaskResult) -> dict[str, Any]:
    return {
        "task": task.task_id,
        "tMeasure": _number(task.t_measure),
        "class": _class(task.compliance_class),
        "dimensions": [_convert_dimension(dim) for dim in task.dimension_metrics],
    }


def _convert_trace(trace: TraceResult) -> dict[str, Any]:
    return {
        "traceId": trace.trace_id,
        "tauMeasure": _number(trace.tau_measure),
        "class": _class(trace.compliance_class),
        "dimensionMinima": {d: _number(v) for d, v in trace.dimension_minima.items()},
        "tasks": [_convert_task(task) for task in trace.task_results],
    }


def _convert_report(result: ProcessResult) -> dict[str, Any]:
    """Get the JSON report document of a ProcessResult in schema key order."""
    return {
        "specId": result.spec_id,
        "processId": result.process_id,
        "pMeasure": _number(result.p_measure),
        "traces": [_convert_trace(trace) for trace in result.trace_results],
    }


def _csv_cell(value: object) -> str:
    match value:
        case None:
            return ""
        case ComplianceClass():
            return value.value
        case float():
            return str(format_number(value))
        case _:
            return str(value)


def _convert_report_rows(result: ProcessResult) -> Iterator[dict[str, str]]:
    """Flatten a ProcessResult into one row per (trace, task, dimension).

    Unscored tasks produce a single row with empty dimension columns.
    """
    for trace in result.trace_results:
        for task in trace.task_results:
            head = {
                "specId": result.spec_id,
                "processId": result.process_id,
                "pMeasure": result.p_measure,
                "traceId": trace.trace_id,
                "tauMeasure": trace.tau_measure,
                "traceClass": trace.compliance_class,
                "position": task.position,
                "task": task.task_id,
                "tMeasure": task.t_measure,
                "taskClass": task.compliance_class,
            }
            dims: list[DimensionMetric | None] = list(task.dimension_metrics) or [None]
            for dim in dims:
                row: dict[str, object] = dict(head)
                if dim is not None:
                    row |= {
                        "dimension": dim.dimension,
                        "value": dim.value,
                        "class": dim.compliance_class,
                        "contributing": ";".join(
                            f"{name}={_csv_cell(score) or 'null'}"
                            for name, score in dim.contributing
                        ),
                    }
                yield {column: _csv_cell(row.get(column)) for column in REPORT_CSV_COLUMNS}


def _text(value: MetricValue | ComplianceClass | None) -> str:
    match value:
        case None:
            return "--"
        case ComplianceClass():
            return value.value
        case _:
            return str(format_number(value))


def _render_table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return [
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    ]


def explain_trace(result: TraceResult) -> str:
    """Render the per-task breakdown of a trace as a plain-text table.

    One column per task; rows list attribute scores per dimension,
    the dimension metrics, T-measure and class. Unscored cells show '--'.
    """
    tasks = result.task_results
    header = ["Dimension", "Attribute", *(task.task_id for task in tasks)]

    attribute_rows: dict[tuple[str, str], list[str]] = {}
    dimension_rows: dict[str, list[str]] = {}
    for column, task in enumerate(tasks):
        for dim in task.dimension_metrics:
            dimension_rows.setdefault(dim.dimension, ["--"] * len(tasks))[column] = _text(
                dim.value
            )
            for name, score in dim.contributing:
                attribute_rows.setdefault((dim.dimension, name), ["--"] * len(tasks))[
                    column
                ] = _text(score)

    rows = [header]
    rows.extend(
        [dimension, name, *cells]
        for (dimension, name), cells in sorted(attribute_rows.items())
    )
    rows.extend(
        [dimension, "(metric)", *cells] for dimension, cells in sorted(dimension_rows.items())
    )
    rows.append(["T-Measure", "", *(_text(task.t_measure) for task in tasks)])
    rows.append(["Class", "", *(_text(task.compliance_class) for task in tasks)])

    minima = ", ".join(f"{d}={_text(v)}" for d, v in result.dimension_minima.items())
    lines = [
        f"Trace {result.trace_id}",
        "",
        *_render_table(rows),
        "",
        f"Dimension minima: {minima}",
        f"tau-measure = {_text(result.tau_measure)} ({result.compliance_class.value})",
    ]
    return "\n".join(lines) + "\n"
