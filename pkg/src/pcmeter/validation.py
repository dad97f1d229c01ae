"""Static validation of a ComplianceSpec."""

import math

from pcmeter.model import (
    AggregatorChoice,
    ComplianceSpec,
    CutoffThreshold,
    Finding,
)
from pcmeter.projection import RuleRef, check_projection
from pcmeter.types import Severity
from pcmeter.utils.utils import EPSILON

__all__ = ("validate_spec", "errors_of")


def _finding(code: str, path: str, message: str, severity: Severity = "error") -> Finding:
    return Finding(severity=severity, code=code, path=path, message=message)


def _check_cutoff(cutoff: CutoffThreshold, path: str) -> list[Finding]:
    findings = []
    for name, value in cutoff._asdict().items():
        if not 0.0 <= value <= 1.0:
            findings.append(
                _finding(
                    "CUTOFF_OUT_OF_RANGE",
                    f"{path}.{name}",
                    f"{name.capitalize()} {value} outside of [0, 1].",
                )
            )
    if cutoff.cutoff + cutoff.threshold > 1.0 + EPSILON:
        findings.append(
            _finding(
                "CUTOFF_PLUS_THRESHOLD_EXCEEDS_ONE",
                path,
                f"Cutoff {cutoff.cutoff} plus threshold {cutoff.threshold} exceeds 1.",
            )
        )
    return findings


def _check_weight(weight: float, path: str) -> list[Finding]:
    if math.isfinite(weight) and weight > 0.0:
        return []
    return [_finding("NON_POSITIVE_WEIGHT", path, f"Weight must be positive, got {weight}.")]


def _check_aggregator(
    choice: AggregatorChoice, path: str, spec: ComplianceSpec
) -> list[Finding]:
    match choice:
        case AggregatorChoice(kind="rule", rule_name=None):
            return [_finding("RULE_NAME_REQUIRED", path, "Rule aggregator names no rule.")]
        case AggregatorChoice(kind="rule", rule_name=rule_name) if rule_name not in spec.rules:
            return [_finding("UNRESOLVED_RULE", path, f"Rule '{rule_name}' is not defined.")]
        case AggregatorChoice(kind="rule"):
            return []
        case AggregatorChoice(kind=kind, rule_name=rule_name) if rule_name is not None:
            return [
                _finding(
                    "UNEXPECTED_RULE_NAME",
                    path,
                    f"Aggregator '{kind}' does not take a rule, got '{rule_name}'.",
                )
            ]
        case AggregatorChoice(kind="min" | "max" as kind):
            return [
                _finding(
                    "MIN_MAX_AGGREGATOR",
                    path,
                    f"'{kind}' ignores all but one score and flattens partial compliance.",
                    severity="warning",
                )
            ]
        case _:
            return []


def validate_spec(spec: ComplianceSpec) -> list[Finding]:
    """Check a ComplianceSpec for structural errors and questionable choices.

    Findings carry JSONPath-like locations into the spec document.
    An empty list (or warnings only) means the spec can be evaluated.
    """
    findings: list[Finding] = []

    for dimension, cutoff in spec.dimension_defaults.items():
        findings.extend(_check_cutoff(cutoff, f"$.dimensions.{dimension}"))
    for dimension, weight in spec.dimension_weights.items():
        findings.extend(_check_weight(weight, f"$.dimensions.{dimension}.weight"))

    for level, choice in (
        ("attribute", spec.attribute_aggregator),
        ("dimension", spec.dimension_aggregator),
        ("trace", spec.trace_aggregator),
    ):
        findings.extend(_check_aggregator(choice, f"$.aggregators.{level}", spec))

    seen: set[tuple[str, str]] = set()
    for i, attribute_spec in enumerate(spec.attribute_specs):
        path = f"$.attributes[{i}]"
        key = (attribute_spec.task_selector, attribute_spec.attribute_name)
        if key in seen:
            findings.append(
                _finding(
                    "DUPLICATE_ATTRIBUTE_SPEC",
                    path,
                    f"Attribute '{key[1]}' is declared twice for task selector '{key[0]}'.",
                )
            )
        seen.add(key)

        findings.extend(_check_weight(attribute_spec.weight, f"{path}.weight"))
        if attribute_spec.cutoff_override is not None:
            findings.extend(_check_cutoff(attribute_spec.cutoff_override, path))

        if attribute_spec.meta:
            continue

        if spec.cutoff_for(attribute_spec) is None:
            findings.append(
                _finding(
                    "MISSING_CUTOFF",
                    path,
                    f"Dimension '{attribute_spec.dimension}' has no cutoff and threshold.",
                )
            )

        match attribute_spec.projection:
            case None:
                findings.append(
                    _finding(
                        "MISSING_PROJECTION",
                        path,
                        f"Scored attribute '{attribute_spec.attribute_name}' has no projection.",
                    )
                )
            case RuleRef(rule_name=rule_name) if rule_name not in spec.rules:
                findings.append(
                    _finding(
                        "UNRESOLVED_RULE",
                        f"{path}.projection",
                        f"Rule '{rule_name}' is not defined.",
                    )
                )
            case projection:
                findings.extend(check_projection(projection, f"{path}.projection"))

    return findings


def errors_of(findings: list[Finding]) -> list[Finding]:
    return [finding for finding in findings if finding.severity == "error"]
