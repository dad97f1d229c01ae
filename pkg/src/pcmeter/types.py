"""pcmeter type definitions."""

from enum import StrEnum
from typing import Literal as PyLiteral, Self

from pcmeter.errors import MetricRangeError
from pcmeter.utils.utils import EPSILON

__all__ = (
    "DimensionId",
    "Metric",
    "MetricValue",
    "ComplianceClass",
    "Unit",
    "BandDirection",
    "AggregatorKind",
    "Severity",
    "LogFormat",
    "ReportFormat",
    "CANONICAL_DIMENSIONS",
)


class DimensionId(str):
    """Case-normalized compliance dimension name.

    DimensionId("Temporal") == DimensionId("temporal") == "temporal"
    """

    def __new__(cls, name: str) -> Self:
        normalized = name.strip().lower()
        if not normalized:
            raise ValueError("Dimension name must not be empty.")
        return super().__new__(cls, normalized)


CANONICAL_DIMENSIONS: tuple[DimensionId, ...] = tuple(
    map(DimensionId, ("temporal", "monetary", "role", "data", "quality", "percentage"))
)


class Metric(float):
    """Compliance score in [0, 1].

    Values that overshoot the unit interval by less than EPSILON
    (float noise from sums and means) are clamped; anything else is rejected.
    The Null metric is represented by None, see MetricValue.
    """

    def __new__(cls, value: float) -> Self:
        value = float(value)
        if value != value:
            raise MetricRangeError("Metric value must not be NaN.")
        if -EPSILON <= value < 0.0:
            value = 0.0
        elif 1.0 < value <= 1.0 + EPSILON:
            value = 1.0
        if not 0.0 <= value <= 1.0:
            raise MetricRangeError(f"Metric value {value} outside of [0, 1].")
        return super().__new__(cls, value)


type MetricValue = Metric | None
"""A Metric or the distinguished Null value (dimension not applicable)."""


class ComplianceClass(StrEnum):
    NON_COMPLIANT = "non"
    PARTIALLY_COMPLIANT = "partial"
    FULLY_COMPLIANT = "full"


type Unit = PyLiteral["days", "currency", "percent", "none"]
type BandDirection = PyLiteral["lower-is-better", "higher-is-better"]
type AggregatorKind = PyLiteral[
    "average", "weighted-average", "product", "min", "max", "rule"
]
type Severity = PyLiteral["error", "warning"]
type LogFormat = PyLiteral["jsonl", "csv"]
type ReportFormat = PyLiteral["json", "csv"]
