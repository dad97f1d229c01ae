"""Aggregation operators used for attribute, dimension and trace level scores."""

from collections.abc import Callable, Iterator, Mapping, Sequence
import math
from typing import NamedTuple

from pcmeter.model import AggregatorChoice
from pcmeter.rules import Binding, RuleAst, evaluate_rule
from pcmeter.types import AggregatorKind, DimensionId, Metric, MetricValue

type Aggregator = Callable[[Sequence[float], Sequence[float]], float]


class Scored(NamedTuple):
    """A named score entering an aggregation.

    `value` is the raw numeric attribute value, available to rules as val(key).
    """

    key: str
    score: MetricValue
    weight: float = 1.0
    value: float | None = None


class _DimensionBindings(Mapping[str, Binding]):
    """Rule bindings keyed by dimension; phi(Temporal) and phi(temporal) are the same name."""

    def __init__(self, bindings: Mapping[str, Binding]) -> None:
        self._bindings = {DimensionId(key): binding for key, binding in bindings.items()}

    def __getitem__(self, key: str) -> Binding:
        return self._bindings[DimensionId(key)]

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)


def _average(scores: Sequence[float], weights: Sequence[float]) -> float:
    return math.fsum(scores) / len(scores)


def _weighted_average(scores: Sequence[float], weights: Sequence[float]) -> float:
    total = math.fsum(weights)
    if total <= 0.0:
        raise ValueError("Weighted average requires a positive total weight.")
    return math.fsum(s * w for s, w in zip(scores, weights)) / total


def _product(scores: Sequence[float], weights: Sequence[float]) -> float:
    return math.prod(scores)


def _min(scores: Sequence[float], weights: Sequence[float]) -> float:
    return min(scores)


def _max(scores: Sequence[float], weights: Sequence[float]) -> float:
    return max(scores)


def get_aggregator(kind: AggregatorKind) -> Aggregator:
    match kind:
        case "average":
            return _average
        case "weighted-average":
            return _weighted_average
        case "product":
            return _product
        case "min":
            return _min
        case "max":
            return _max
        case _:
            raise ValueError(f"No numeric aggregator for kind '{kind}'.")


def aggregate(
    choice: AggregatorChoice,
    items: Sequence[Scored],
    rules: Mapping[str, RuleAst],
    *,
    dimensions: bool = False,
) -> MetricValue:
    """Aggregate scores according to an AggregatorChoice.

    Numeric aggregators skip Null scores and return Null if nothing remains.
    Rule aggregators see every item, Null scores included, as phi(key).
    With `dimensions`, keys are dimension names and rule references to them
    are case-normalized.
    """
    if choice.kind == "rule":
        assert choice.rule_name is not None
        bindings: Mapping[str, Binding] = {
            item.key: Binding(value=item.value, phi=item.score, scored=True)
            for item in items
        }
        if dimensions:
            bindings = _DimensionBindings(bindings)
        return evaluate_rule(rules[choice.rule_name], bindings)

    scores = [item.score for item in items if item.score is not None]
    if not scores:
        return None
    weights = [item.weight for item in items if item.score is not None]

    aggregator = get_aggregator(choice.kind)
    return Metric(aggregator(scores, weights))
