"""Sad path tests for core model construction."""

import math

import pytest

from pcmeter.model import AttributeValue, Quantity, TaskEvent, Trace


@pytest.mark.parametrize("amount", [math.nan, math.inf, -math.inf])
def test_quantity_must_be_finite(amount):
    with pytest.raises(ValueError):
        Quantity(amount)


def test_attribute_value_rejects_bool():
    with pytest.raises(TypeError):
        AttributeValue.of("flag", True)


def test_attribute_value_rejects_unsupported():
    with pytest.raises(TypeError):
        AttributeValue.of("x", [1, 2])  # type: ignore[arg-type]


def test_attribute_name_must_not_be_empty():
    with pytest.raises(ValueError):
        AttributeValue.of("", 1)


def test_task_event_duplicate_attribute_names():
    with pytest.raises(ValueError, match="Duplicate attribute names"):
        TaskEvent("T2", 0, (AttributeValue.of("a", 1), AttributeValue.of("a", 2)))


def test_task_event_negative_position():
    with pytest.raises(ValueError):
        TaskEvent("T2", -1)


def test_trace_positions_must_be_contiguous():
    with pytest.raises(ValueError, match="0..n-1"):
        Trace("t", (TaskEvent("T1", 0), TaskEvent("T2", 2)))
