"""Unit tests for aggregation operators."""

from typing import NamedTuple

from hypothesis import given, settings, strategies as st
import pytest

from pcmeter.model import AggregatorChoice
from pcmeter.rules import parse_rule
from pcmeter.types import AggregatorKind
from pcmeter.utils.aggregators import Scored, aggregate, get_aggregator

SCORES = [Scored("a", 0.7), Scored("b", 0.9), Scored("c", 1.0)]


class AggregateParams(NamedTuple):
    kind: AggregatorKind
    items: list[Scored]
    expected: float | None


params = [
    AggregateParams("average", SCORES, 13 / 15),
    AggregateParams("product", SCORES, 0.63),
    AggregateParams("min", SCORES, 0.7),
    AggregateParams("max", SCORES, 1.0),
    AggregateParams(
        "weighted-average", [Scored("a", 0.5, weight=1), Scored("b", 1.0, weight=3)], 0.875
    ),
    AggregateParams("average", [Scored("a", None), Scored("b", 0.4)], 0.4),
    AggregateParams("average", [Scored("a", None)], None),
    AggregateParams("product", [], None),
]


@pytest.mark.parametrize("param", params)
def test_aggregate(param):
    result = aggregate(AggregatorChoice(param.kind), param.items, {})

    if param.expected is None:
        assert result is None
    else:
        assert result == pytest.approx(param.expected, abs=1e-9)


def test_rule_aggregator_sees_null_scores():
    rules = {"anyNull": parse_rule("if phi(a) = 0 then 0 else 1")}
    choice = AggregatorChoice("rule", "anyNull")

    assert aggregate(choice, [Scored("a", 0.0), Scored("b", 1.0)], rules) == 0.0
    assert aggregate(choice, [Scored("a", None), Scored("b", 1.0)], rules) == 1.0


def test_rule_aggregator_binds_values():
    rules = {"big": parse_rule("if val(a) >= 10 then 1 else 0.5")}
    choice = AggregatorChoice("rule", "big")

    assert aggregate(choice, [Scored("a", 0.2, value=12.0)], rules) == 1.0


def test_no_numeric_aggregator_for_rule():
    with pytest.raises(ValueError):
        get_aggregator("rule")


_unit_scores = st.lists(
    st.integers(0, 20).map(lambda i: i / 20), min_size=1, max_size=6
)


@settings(max_examples=200)
@given(scores=_unit_scores, index=st.integers(0, 5), kind=st.sampled_from(["average", "product", "min", "max"]))
def test_aggregation_is_monotone(scores, index, kind):
    """Raising one score never lowers the aggregate."""
    index %= len(scores)
    raised = [*scores]
    raised[index] = 1.0

    before = aggregate(AggregatorChoice(kind), [Scored(str(i), s) for i, s in enumerate(scores)], {})
    after = aggregate(AggregatorChoice(kind), [Scored(str(i), s) for i, s in enumerate(raised)], {})

    assert after >= before - 1e-9
    assert 0.0 <= before <= 1.0
