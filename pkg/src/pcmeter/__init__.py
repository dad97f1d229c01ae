from pcmeter.errors import ComplianceError, SpecInvalidError
from pcmeter.evaluator import ComplianceEvaluator
from pcmeter.io import dump_log, emit_report, load_log, load_spec, read_spec
from pcmeter.metrics import (
    DimensionMetric,
    ProcessResult,
    TaskResult,
    TraceResult,
    attribute_dimension_metric,
    classify_dimension,
    classify_task,
    classify_trace,
    evaluate_task,
    p_measure,
    t_measure,
    tau_measure,
)
from pcmeter.model import (
    AggregatorChoice,
    AttributeSpec,
    AttributeValue,
    ComplianceSpec,
    CutoffThreshold,
    Finding,
    Level,
    ProcessLog,
    Quantity,
    TaskEvent,
    Trace,
    dimensions_of_task,
    resolve_attribute_spec,
)
from pcmeter.projection import (
    CategoricalMap,
    Constant,
    NumericBands,
    RuleRef,
    check_monotone,
    default_scale_map,
    project,
    user_scale_map,
)
from pcmeter.rules import evaluate_rule, format_rule, parse_rule
from pcmeter.types import ComplianceClass, DimensionId, Metric, MetricValue
from pcmeter.utils.converters import explain_trace
from pcmeter.validation import validate_spec

__all__ = (
    "ComplianceEvaluator",
    "ComplianceError",
    "SpecInvalidError",
    "AggregatorChoice",
    "AttributeSpec",
    "AttributeValue",
    "ComplianceSpec",
    "CutoffThreshold",
    "Finding",
    "Level",
    "ProcessLog",
    "Quantity",
    "TaskEvent",
    "Trace",
    "ComplianceClass",
    "DimensionId",
    "Metric",
    "MetricValue",
    "CategoricalMap",
    "Constant",
    "NumericBands",
    "RuleRef",
    "DimensionMetric",
    "TaskResult",
    "TraceResult",
    "ProcessResult",
    "resolve_attribute_spec",
    "dimensions_of_task",
    "validate_spec",
    "project",
    "default_scale_map",
    "user_scale_map",
    "check_monotone",
    "parse_rule",
    "format_rule",
    "evaluate_rule",
    "attribute_dimension_metric",
    "classify_dimension",
    "classify_task",
    "t_measure",
    "evaluate_task",
    "classify_trace",
    "tau_measure",
    "p_measure",
    "explain_trace",
    "read_spec",
    "load_spec",
    "load_log",
    "dump_log",
    "emit_report",
)
