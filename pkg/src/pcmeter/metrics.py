"""Metric hierarchy: dimension metrics, T-measure, τ-measure and P-measure.

Scores flow bottom-up: attribute projections are aggregated per dimension (⊕),
dimensions per task into the T-measure (⊗), and per-dimension trace minima
into the τ-measure (⊙). The P-measure is the mean τ-measure of a log.
"""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
import math
from types import MappingProxyType
from typing import NamedTuple

from pcmeter.errors import (
    ComplianceError,
    EmptyLogError,
    EmptyTraceError,
    MissingCutoffError,
    NoApplicableDimensionError,
    NullMetricError,
)
from pcmeter.model import (
    AttributeSpec,
    AttributeValue,
    ComplianceSpec,
    CutoffThreshold,
    ProcessLog,
    TaskEvent,
    Trace,
    dimensions_of_task,
    resolve_attribute_spec,
)
from pcmeter.projection import RuleRef, project
from pcmeter.rules import Binding
from pcmeter.types import ComplianceClass, DimensionId, Metric, MetricValue
from pcmeter.utils.aggregators import Scored, aggregate
from pcmeter.utils.logging_hooks import log_process_result, log_trace_result
from pcmeter.utils.utils import snap

__all__ = (
    "DimensionMetric",
    "TaskResult",
    "TraceResult",
    "ProcessResult",
    "attribute_dimension_metric",
    "classify_dimension",
    "classify_task",
    "t_measure",
    "evaluate_task",
    "classify_trace",
    "tau_measure",
    "p_measure",
    "assemble_process_result",
)


@dataclass(frozen=True, slots=True)
class DimensionMetric:
    task_id: str
    dimension: DimensionId
    value: MetricValue
    compliance_class: ComplianceClass | None
    contributing: tuple[tuple[str, MetricValue], ...] = ()

    def __post_init__(self) -> None:
        if (self.value is None) != (self.compliance_class is None):
            raise ValueError(
                "A dimension metric has a compliance class if and only if its value is not Null."
            )


@dataclass(frozen=True, slots=True)
class TaskResult:
    task_id: str
    position: int
    dimension_metrics: tuple[DimensionMetric, ...]
    t_measure: MetricValue
    compliance_class: ComplianceClass | None

    @property
    def scored(self) -> bool:
        return self.compliance_class is not None


@dataclass(frozen=True, slots=True)
class TraceResult:
    trace_id: str
    task_results: tuple[TaskResult, ...]
    dimension_minima: Mapping[DimensionId, Metric]
    tau_measure: MetricValue
    compliance_class: ComplianceClass


@dataclass(frozen=True, slots=True)
class ProcessResult:
    spec_id: str
    process_id: str
    trace_results: tuple[TraceResult, ...]
    p_measure: MetricValue


class _Projection(NamedTuple):
    attribute: AttributeValue
    attribute_spec: AttributeSpec
    score: MetricValue


def _project_event(event: TaskEvent, spec: ComplianceSpec) -> list[_Projection]:
    """Project every scored attribute of an event.

    Band and categorical projections run first so that rule projections
    can refer to their scores via phi(name).
    """
    scored: list[tuple[AttributeValue, AttributeSpec]] = [
        (attribute, attribute_spec)
        for attribute in event.attributes
        if (attribute_spec := resolve_attribute_spec(spec, event.task_id, attribute.name))
        is not None
        and not attribute_spec.meta
    ]
    bindings: dict[str, Binding] = {
        attribute.name: Binding(value=attribute.numeric) for attribute in event.attributes
    }
    scores: dict[str, MetricValue] = {}

    rule_last = sorted(scored, key=lambda pair: isinstance(pair[1].projection, RuleRef))
    for attribute, attribute_spec in rule_last:
        try:
            score = project(attribute_spec.projection, attribute, spec.rules, bindings)
        except ComplianceError as error:
            error.add_note(
                f"Projecting attribute '{attribute.name}' of task "
                f"'{event.task_id}' at position {event.position}."
            )
            raise error
        scores[attribute.name] = score
        bindings[attribute.name] = Binding(value=attribute.numeric, phi=score, scored=True)

    return [
        _Projection(attribute, attribute_spec, scores[attribute.name])
        for attribute, attribute_spec in scored
    ]


def classify_dimension(v: MetricValue, ct: CutoffThreshold) -> ComplianceClass:
    """Classify a dimension metric against its cutoff S and threshold Δ.

    Values within EPSILON of S or S+Δ are snapped onto the boundary.
    """
    if v is None:
        raise NullMetricError("Cannot classify a Null dimension metric.")

    full = ct.cutoff + ct.threshold
    value = snap(v, ct.cutoff, full)
    if value < ct.cutoff:
        return ComplianceClass.NON_COMPLIANT
    if value < full:
        return ComplianceClass.PARTIALLY_COMPLIANT
    return ComplianceClass.FULLY_COMPLIANT


def _cutoff_of(
    dimension: DimensionId, members: Sequence[_Projection], spec: ComplianceSpec
) -> CutoffThreshold:
    """Contributing override first, then the dimension default, then any declared override."""
    candidates = [p.attribute_spec.cutoff_override for p in members if p.score is not None]
    candidates.append(spec.dimension_defaults.get(dimension))
    candidates.extend(p.attribute_spec.cutoff_override for p in members)
    if (cutoff := next((c for c in candidates if c is not None), None)) is None:
        raise MissingCutoffError(f"Dimension '{dimension}' has no cutoff threshold.")
    return cutoff


def _dimension_metric(
    event: TaskEvent,
    dimension: DimensionId,
    projections: Sequence[_Projection],
    spec: ComplianceSpec,
) -> DimensionMetric:
    members = [p for p in projections if p.attribute_spec.dimension == dimension]
    value = aggregate(
        spec.attribute_aggregator,
        [
            Scored(
                key=p.attribute.name,
                score=p.score,
                weight=p.attribute_spec.weight,
                value=p.attribute.numeric,
            )
            for p in members
        ],
        spec.rules,
    )

    compliance_class = None
    if value is not None:
        compliance_class = classify_dimension(value, _cutoff_of(dimension, members, spec))

    return DimensionMetric(
        task_id=event.task_id,
        dimension=dimension,
        value=value,
        compliance_class=compliance_class,
        contributing=tuple((p.attribute.name, p.score) for p in members),
    )


def attribute_dimension_metric(
    event: TaskEvent, d: DimensionId | str, spec: ComplianceSpec
) -> DimensionMetric:
    """Aggregate the projected attributes of an event in dimension d (⊕).

    Null scores are ignored; the metric is Null if no score remains.
    """
    return _dimension_metric(event, DimensionId(d), _project_event(event, spec), spec)


def _combine_classes(classes: Iterable[ComplianceClass]) -> ComplianceClass:
    collected = list(classes)
    if ComplianceClass.NON_COMPLIANT in collected:
        return ComplianceClass.NON_COMPLIANT
    if all(c == ComplianceClass.FULLY_COMPLIANT for c in collected):
        return ComplianceClass.FULLY_COMPLIANT
    return ComplianceClass.PARTIALLY_COMPLIANT


def _scored_dimensions(dims: Sequence[DimensionMetric]) -> list[DimensionMetric]:
    scored = [dim for dim in dims if dim.value is not None]
    if not scored:
        task_ids = sorted({dim.task_id for dim in dims})
        raise NoApplicableDimensionError(f"No scored dimension for task(s) {task_ids}.")
    return scored


def classify_task(dims: Sequence[DimensionMetric]) -> ComplianceClass:
    return _combine_classes(
        dim.compliance_class
        for dim in _scored_dimensions(dims)
        if dim.compliance_class is not None
    )


def t_measure(dims: Sequence[DimensionMetric], spec: ComplianceSpec) -> MetricValue:
    """Aggregate the dimension metrics of a task into its T-measure (⊗)."""
    _scored_dimensions(dims)
    return aggregate(
        spec.dimension_aggregator,
        [
            Scored(key=dim.dimension, score=dim.value, weight=spec.dimension_weight(dim.dimension))
            for dim in dims
        ],
        spec.rules,
        dimensions=True,
    )


def evaluate_task(event: TaskEvent, spec: ComplianceSpec) -> TaskResult:
    projections = _project_event(event, spec)
    dims = tuple(
        _dimension_metric(event, dimension, projections, spec)
        for dimension in dimensions_of_task(spec, event)
    )

    if all(dim.value is None for dim in dims):
        return TaskResult(
            task_id=event.task_id,
            position=event.position,
            dimension_metrics=dims,
            t_measure=None,
            compliance_class=None,
        )

    return TaskResult(
        task_id=event.task_id,
        position=event.position,
        dimension_metrics=dims,
        t_measure=t_measure(dims, spec),
        compliance_class=classify_task(dims),
    )


def classify_trace(tasks: Sequence[TaskResult]) -> ComplianceClass:
    """Combine task classes; unscored tasks are ignored."""
    if not tasks:
        raise EmptyTraceError("Cannot classify a trace without tasks.")

    classes = [task.compliance_class for task in tasks if task.compliance_class is not None]
    if not classes:
        raise NoApplicableDimensionError("No task of the trace has a scored dimension.")
    return _combine_classes(classes)


def _dimension_minima(task_results: Iterable[TaskResult]) -> dict[DimensionId, Metric]:
    values: dict[DimensionId, list[float]] = {}
    for task in task_results:
        for dim in task.dimension_metrics:
            if dim.value is not None:
                values.setdefault(dim.dimension, []).append(dim.value)

    minima: dict[DimensionId, Metric] = {}
    for dimension in sorted(values):
        positives = [v for v in values[dimension] if snap(v, 0.0) > 0.0]
        minima[dimension] = Metric(min(positives)) if positives else Metric(0.0)
    return minima


def tau_measure(trace: Trace, spec: ComplianceSpec) -> TraceResult:
    """Compute the τ-measure of a trace.

    Per dimension the smallest strictly positive task metric is taken
    (0 if the dimension never scored above 0); the minima are aggregated with ⊙.
    """
    if not trace.events:
        raise EmptyTraceError(f"Trace '{trace.trace_id}' has no events.")

    task_results = tuple(evaluate_task(event, spec) for event in trace.events)
    minima = _dimension_minima(task_results)
    if not minima:
        raise NoApplicableDimensionError(
            f"No dimension is scored anywhere in trace '{trace.trace_id}'."
        )

    tau = aggregate(
        spec.trace_aggregator,
        [
            Scored(key=dimension, score=value, weight=spec.dimension_weight(dimension))
            for dimension, value in minima.items()
        ],
        spec.rules,
        dimensions=True,
    )

    result = TraceResult(
        trace_id=trace.trace_id,
        task_results=task_results,
        dimension_minima=MappingProxyType(minima),
        tau_measure=tau,
        compliance_class=classify_trace(task_results),
    )
    log_trace_result(result)
    return result


def assemble_process_result(
    log: ProcessLog, spec: ComplianceSpec, trace_results: Sequence[TraceResult]
) -> ProcessResult:
    """Build the ProcessResult from per-trace results in log order.

    Traces with a Null τ-measure are left out of the mean.
    """
    taus = [result.tau_measure for result in trace_results if result.tau_measure is not None]
    p = Metric(math.fsum(taus) / len(taus)) if taus else None

    result = ProcessResult(
        spec_id=spec.spec_id,
        process_id=log.process_id,
        trace_results=tuple(trace_results),
        p_measure=p,
    )
    log_process_result(result)
    return result


def p_measure(log: ProcessLog, spec: ComplianceSpec) -> ProcessResult:
    if not log.traces:
        raise EmptyLogError(f"Process log '{log.process_id}' has no traces.")
    return assemble_process_result(
        log, spec, [tau_measure(trace, spec) for trace in log.traces]
    )
