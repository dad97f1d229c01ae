import json
import logging
from os import PathLike
from typing import TYPE_CHECKING

from pcmeter.types import CANONICAL_DIMENSIONS

if TYPE_CHECKING:  # pragma: no cover
    from pcmeter.metrics import ProcessResult, TraceResult
    from pcmeter.model import ComplianceSpec, ProcessLog


logger = logging.getLogger(__name__)


class StructuredMessage:
    """Simple structured log message class.

    This is taken from the Python logging cookbook:
    https://docs.python.org/3/howto/logging-cookbook.html#implementing-structured-logging
    """

    def __init__(self, message: str, **kwargs):
        self.message = message
        self.kwargs = kwargs

    def __str__(self):
        return "%s >>> %s" % (self.message, json.dumps(self.kwargs, default=str))


def log_spec_loaded(spec: "ComplianceSpec", path: str | PathLike[str]) -> None:
    info_message = StructuredMessage(
        "Spec loaded",
        spec_id=spec.spec_id,
        path=path,
        attribute_specs=len(spec.attribute_specs),
    )
    logger.info(info_message)

    debug_message = StructuredMessage(
        "Spec loaded",
        spec_id=spec.spec_id,
        dimensions={d: list(ct) for d, ct in spec.dimension_defaults.items()},
        aggregators=[
            spec.attribute_aggregator.kind,
            spec.dimension_aggregator.kind,
            spec.trace_aggregator.kind,
        ],
        rules=sorted(spec.rules),
        custom_dimensions=sorted(
            {s.dimension for s in spec.attribute_specs} - set(CANONICAL_DIMENSIONS)
        ),
    )
    logger.debug(debug_message)


def log_log_loaded(
    log: "ProcessLog", path: str | PathLike[str], log_format: str
) -> None:
    info_message = StructuredMessage(
        "Log loaded",
        process_id=log.process_id,
        path=path,
        format=log_format,
        traces=len(log.traces),
    )
    logger.info(info_message)


def log_trace_result(result: "TraceResult") -> None:
    debug_message = StructuredMessage(
        "Trace evaluated",
        trace_id=result.trace_id,
        tau_measure=result.tau_measure,
        compliance_class=result.compliance_class,
        dimension_minima=dict(result.dimension_minima),
    )
    logger.debug(debug_message)


def log_process_result(result: "ProcessResult") -> None:
    info_message = StructuredMessage(
        "Process evaluated",
        spec_id=result.spec_id,
        process_id=result.process_id,
        traces=len(result.trace_results),
        p_measure=result.p_measure,
    )
    logger.info(info_message)


def log_report_written(path: str | PathLike[str], report_format: str, size: int) -> None:
    info_message = StructuredMessage(
        "Report written", path=path, format=report_format, bytes=size
    )
    logger.info(info_message)
