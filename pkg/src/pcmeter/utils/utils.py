import math
import os

EPSILON: float = 1e-9
"""Absolute tolerance for all real comparisons."""


def snap(value: float, *targets: float) -> float:
    """Snap value onto the first target within EPSILON, else return it unchanged."""
    for target in targets:
        if math.isclose(value, target, rel_tol=0.0, abs_tol=EPSILON):
            return target
    return value


def tolerant_compare(left: float, op: str, right: float) -> bool:
    match op:
        case "<":
            return left < right - EPSILON
        case "<=":
            return left <= right + EPSILON
        case "=":
            return abs(left - right) <= EPSILON
        case "!=":
            return abs(left - right) > EPSILON
        case ">=":
            return left >= right - EPSILON
        case ">":
            return left > right + EPSILON
        case _:  # pragma: no cover
            raise ValueError(f"Unsupported comparison operator: {op}")


def format_number(value: float, digits: int = 12) -> int | float:
    """Round to `digits` significant digits; integral values become ints."""
    rounded = float(f"{value:.{digits}g}")
    return int(rounded) if rounded.is_integer() else rounded


def default_jobs() -> int:
    return os.cpu_count() or 1

