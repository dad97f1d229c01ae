"""Core compliance model.

Value types for attribute values, task events, traces and process logs
as well as the declarative ComplianceSpec. All types are immutable.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
import datetime
import math
from types import MappingProxyType
from typing import TYPE_CHECKING, NamedTuple, Self

from pcmeter.errors import DuplicateTraceIdError, UnknownTraceIdError
from pcmeter.types import AggregatorKind, DimensionId, Severity, Unit

if TYPE_CHECKING:  # pragma: no cover
    from pcmeter.projection import ProjectionFn
    from pcmeter.rules import RuleAst


__all__ = (
    "WILDCARD",
    "Quantity",
    "Level",
    "AttributeData",
    "AttributeValue",
    "TaskEvent",
    "Trace",
    "ProcessLog",
    "CutoffThreshold",
    "AggregatorChoice",
    "AttributeSpec",
    "ComplianceSpec",
    "Finding",
    "resolve_attribute_spec",
    "dimensions_of_task",
)

WILDCARD = "*"


@dataclass(frozen=True, slots=True)
class Quantity:
    amount: float
    unit: Unit = "none"

    def __post_init__(self) -> None:
        if isinstance(self.amount, bool) or not math.isfinite(self.amount):
            raise ValueError(f"Quantity amount must be a finite number, got {self.amount!r}.")


@dataclass(frozen=True, slots=True)
class Level:
    """A label on an ordered categorical scale."""

    label: str


type AttributeData = Quantity | Level | datetime.date | str


@dataclass(frozen=True, slots=True)
class AttributeValue:
    name: str
    value: AttributeData

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("Attribute name must not be empty.")

    @classmethod
    def of(
        cls, name: str, raw: AttributeData | float, unit: Unit = "none"
    ) -> Self:
        """Construct an AttributeValue from a plain Python value.

        Numbers become Quantity instances tagged with `unit`.
        """
        match raw:
            case bool():
                raise TypeError(f"Boolean attribute values are not supported: {name}.")
            case int() | float():
                return cls(name=name, value=Quantity(amount=float(raw), unit=unit))
            case Quantity() | Level() | datetime.date() | str():
                return cls(name=name, value=raw)
            case _:
                raise TypeError(f"Unsupported attribute value for '{name}': {raw!r}")

    @property
    def numeric(self) -> float | None:
        return self.value.amount if isinstance(self.value, Quantity) else None

    @property
    def kind(self) -> str:
        match self.value:
            case Quantity():
                return "number"
            case Level():
                return "level"
            case datetime.date():
                return "date"
            case _:
                return "text"


@dataclass(frozen=True, slots=True)
class TaskEvent:
    task_id: str
    position: int
    attributes: tuple[AttributeValue, ...] = ()

    def __post_init__(self) -> None:
        if not self.task_id:
            raise ValueError("Task id must not be empty.")
        if self.position < 0:
            raise ValueError(f"Event position must be non-negative, got {self.position}.")

        names = [attribute.name for attribute in self.attributes]
        if len(names) != len(set(names)):
            duplicates = sorted({name for name in names if names.count(name) > 1})
            raise ValueError(
                f"Duplicate attribute names on task '{self.task_id}': {duplicates}"
            )

    def attribute(self, name: str) -> AttributeValue | None:
        return next((a for a in self.attributes if a.name == name), None)


@dataclass(frozen=True, slots=True)
class Trace:
    trace_id: str
    events: tuple[TaskEvent, ...]

    def __post_init__(self) -> None:
        positions = [event.position for event in self.events]
        if positions != list(range(len(positions))):
            raise ValueError(
                f"Event positions of trace '{self.trace_id}' must be 0..n-1 "
                f"in order, got {positions}."
            )

    @classmethod
    def from_tasks(
        cls,
        trace_id: str,
        tasks: Iterable[tuple[str, Iterable[AttributeValue]]],
    ) -> Self:
        """Build a trace from (task id, attributes) pairs; positions follow order."""
        events = tuple(
            TaskEvent(task_id=task_id, position=position, attributes=tuple(attributes))
            for position, (task_id, attributes) in enumerate(tasks)
        )
        return cls(trace_id=trace_id, events=events)

    @property
    def task_ids(self) -> tuple[str, ...]:
        return tuple(event.task_id for event in self.events)


@dataclass(frozen=True, slots=True)
class ProcessLog:
    process_id: str
    traces: tuple[Trace, ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for trace in self.traces:
            if trace.trace_id in seen:
                raise DuplicateTraceIdError(
                    f"Duplicate trace id '{trace.trace_id}' in process log '{self.process_id}'."
                )
            seen.add(trace.trace_id)

    def trace(self, trace_id: str) -> Trace:
        for trace in self.traces:
            if trace.trace_id == trace_id:
                return trace
        raise UnknownTraceIdError(
            f"Trace '{trace_id}' not found in process log '{self.process_id}'."
        )


class CutoffThreshold(NamedTuple):
    """Metric-domain cut-off (S) and threshold (Δ) of a dimension.

    v < S is non-compliant, S <= v < S+Δ partially compliant, v >= S+Δ fully compliant.
    Range invariants are reported by validate_spec.
    """

    cutoff: float
    threshold: float


class AggregatorChoice(NamedTuple):
    kind: AggregatorKind = "average"
    rule_name: str | None = None


@dataclass(frozen=True, slots=True)
class AttributeSpec:
    task_selector: str
    attribute_name: str
    dimension: DimensionId
    projection: "ProjectionFn | None" = None
    weight: float = 1.0
    cutoff_override: CutoffThreshold | None = None
    meta: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "dimension", DimensionId(self.dimension))


@dataclass(frozen=True, slots=True)
class ComplianceSpec:
    """Declarative description of how task attributes are scored and aggregated.

    The aggregators correspond to attribute aggregation within a dimension (⊕),
    dimension aggregation within a task (⊗) and dimension aggregation within a trace (⊙).
    """

    spec_id: str
    attribute_specs: tuple[AttributeSpec, ...]
    dimension_defaults: Mapping[DimensionId, CutoffThreshold] = field(
        default_factory=dict
    )
    attribute_aggregator: AggregatorChoice = AggregatorChoice()
    dimension_aggregator: AggregatorChoice = AggregatorChoice()
    trace_aggregator: AggregatorChoice = AggregatorChoice()
    rules: Mapping[str, "RuleAst"] = field(default_factory=dict)
    dimension_weights: Mapping[DimensionId, float] = field(default_factory=dict)
    _index: Mapping[tuple[str, str], AttributeSpec] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "attribute_specs", tuple(self.attribute_specs))
        object.__setattr__(
            self,
            "dimension_defaults",
            MappingProxyType(
                {DimensionId(k): CutoffThreshold(*v) for k, v in self.dimension_defaults.items()}
            ),
        )
        object.__setattr__(
            self,
            "dimension_weights",
            MappingProxyType({DimensionId(k): v for k, v in self.dimension_weights.items()}),
        )
        object.__setattr__(self, "rules", MappingProxyType(dict(self.rules)))

        index: dict[tuple[str, str], AttributeSpec] = {}
        for attribute_spec in self.attribute_specs:
            # first declaration wins; duplicates are reported by validate_spec
            index.setdefault(
                (attribute_spec.task_selector, attribute_spec.attribute_name),
                attribute_spec,
            )
        object.__setattr__(self, "_index", MappingProxyType(index))

    def cutoff_for(self, attribute_spec: AttributeSpec) -> CutoffThreshold | None:
        if attribute_spec.cutoff_override is not None:
            return attribute_spec.cutoff_override
        return self.dimension_defaults.get(attribute_spec.dimension)

    def dimension_weight(self, dimension: DimensionId) -> float:
        return self.dimension_weights.get(dimension, 1.0)


class Finding(NamedTuple):
    severity: Severity
    code: str
    path: str
    message: str


def resolve_attribute_spec(
    spec: ComplianceSpec, task_id: str, attribute_name: str
) -> AttributeSpec | None:
    """Look up the AttributeSpec for a task attribute.

    An exact task match takes precedence over the wildcard selector.
    """
    exact = spec._index.get((task_id, attribute_name))
    return exact if exact is not None else spec._index.get((WILDCARD, attribute_name))


def dimensions_of_task(spec: ComplianceSpec, event: TaskEvent) -> tuple[DimensionId, ...]:
    """Get the scored dimensions of a task event in lexicographic order."""
    dimensions = {
        attribute_spec.dimension
        for attribute in event.attributes
        if (attribute_spec := resolve_attribute_spec(spec, event.task_id, attribute.name))
        is not None
        and not attribute_spec.meta
    }
    return tuple(sorted(dimensions))
