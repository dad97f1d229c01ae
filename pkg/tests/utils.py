"""pcmeter testing utils."""

import asyncio
from collections.abc import Iterable, Mapping
import math
from typing import Any, NamedTuple

from hypothesis import strategies as st

from pcmeter.model import (
    AttributeSpec,
    AttributeValue,
    ComplianceSpec,
    CutoffThreshold,
    TaskEvent,
    Trace,
)
from pcmeter.payment import PaymentScenario
from pcmeter.projection import Constant, NumericBands

FULL_SCENARIO = PaymentScenario(principal=500.0, pay_in_days=10, equipment_delivery_days=2)
PARTIAL_SCENARIO = PaymentScenario(principal=500.0, pay_in_days=20, equipment_delivery_days=2)
NON_SCENARIO = PaymentScenario(principal=500.0, pay_in_days=33, equipment_delivery_days=2)


async def acall(obj: Any, method: str, *args, **kwargs):
    f = getattr(obj, method)

    return (
        await f(*args, **kwargs)
        if asyncio.iscoroutinefunction(f)
        else f(*args, **kwargs)
    )


def event(task_id: str, position: int = 0, **attributes: Any) -> TaskEvent:
    return TaskEvent(
        task_id=task_id,
        position=position,
        attributes=tuple(AttributeValue.of(name, raw) for name, raw in attributes.items()),
    )


def constant_spec(
    scores: Mapping[str, tuple[str, float]],
    cutoff: CutoffThreshold = CutoffThreshold(0.3, 0.4),
    **kwargs: Any,
) -> ComplianceSpec:
    """Spec scoring attribute name -> (dimension, constant score) for every task."""
    return ComplianceSpec(
        spec_id="constant",
        attribute_specs=tuple(
            AttributeSpec("*", name, dimension, Constant(score))
            for name, (dimension, score) in scores.items()
        ),
        dimension_defaults={dimension: cutoff for dimension, _ in scores.values()},
        **kwargs,
    )


class RandomCase(NamedTuple):
    spec: ComplianceSpec
    trace: Trace
    bands: dict[str, NumericBands]
    dimensions: dict[str, str]


_SCORE_GRID = [i / 20 for i in range(21)]


@st.composite
def bands_strategy(draw: st.DrawFn) -> NumericBands:
    bounds = sorted(draw(st.sets(st.integers(0, 50), min_size=1, max_size=3)))
    scores = sorted(
        draw(st.lists(st.sampled_from(_SCORE_GRID), min_size=len(bounds) + 1, max_size=len(bounds) + 1)),
        reverse=True,
    )
    return NumericBands(
        direction="lower-is-better",
        bands=tuple(zip([*map(float, bounds), math.inf], scores)),
    )


@st.composite
def random_cases(draw: st.DrawFn, max_traces: int = 1) -> list[RandomCase]:
    """Random spec and up to `max_traces` traces over it.

    Traces have up to 5 tasks, 3 dimensions and 4 attributes, and unique ids.
    """
    names = [f"a{i}" for i in range(draw(st.integers(1, 4)))]
    dimensions = {name: draw(st.sampled_from(["d0", "d1", "d2"])) for name in names}
    bands = {name: draw(bands_strategy()) for name in names}

    spec = ComplianceSpec(
        spec_id="random",
        attribute_specs=tuple(
            AttributeSpec("*", name, dimensions[name], bands[name]) for name in names
        ),
        dimension_defaults={d: CutoffThreshold(0.3, 0.4) for d in set(dimensions.values())},
    )

    cases = []
    for trace_index in range(draw(st.integers(1, max_traces))):
        tasks = []
        for i in range(draw(st.integers(1, 5))):
            present = draw(
                st.lists(st.sampled_from(names), unique=True, max_size=len(names))
            )
            tasks.append(
                (
                    f"T{i}",
                    [AttributeValue.of(name, draw(st.integers(0, 60))) for name in present],
                )
            )
        if not any(attributes for _, attributes in tasks):
            tasks[0] = ("T0", [AttributeValue.of(names[0], draw(st.integers(0, 60)))])

        cases.append(
            RandomCase(
                spec=spec,
                trace=Trace.from_tasks(f"random-{trace_index}", tasks),
                bands=bands,
                dimensions=dimensions,
            )
        )
    return cases


def random_case() -> st.SearchStrategy[RandomCase]:
    """Random spec and a single trace over it."""
    return random_cases().map(lambda cases: cases[0])


def naive_band_score(bands: NumericBands, value: float) -> float:
    for bound, score in bands.bands:
        if value <= bound:
            return score
    raise AssertionError("bands do not cover value")


def oracle_tau(case: RandomCase) -> float:
    """Recompute the τ-measure from a flat (task, dimension, score) table."""
    table = [
        (i, case.dimensions[a.name], naive_band_score(case.bands[a.name], a.value.amount))
        for i, e in enumerate(case.trace.events)
        for a in e.attributes
    ]

    minima = []
    for dimension in sorted({row[1] for row in table}):
        per_task = []
        for i in range(len(case.trace.events)):
            scores = [s for (j, d, s) in table if j == i and d == dimension]
            if scores:
                per_task.append(sum(scores) / len(scores))
        positives = [v for v in per_task if v > 0]
        minima.append(min(positives) if positives else 0.0)

    return sum(minima) / len(minima)


def task_ids(results: Iterable[Any]) -> list[str]:
    return [result.task_id for result in results]
