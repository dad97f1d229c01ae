"""Projection functions mapping attribute values into the metric domain [0, 1]."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
import math
from types import MappingProxyType
from typing import NamedTuple

from pcmeter.errors import (
    EmptyScaleError,
    KindMismatchError,
    UnboundReferenceError,
    UnknownLevelError,
)
from pcmeter.model import AttributeValue, Finding, Level
from pcmeter.rules import Bindings, RuleAst, evaluate_rule
from pcmeter.types import BandDirection, Metric, MetricValue
from pcmeter.utils.utils import EPSILON

__all__ = (
    "Band",
    "NumericBands",
    "CategoricalMap",
    "RuleRef",
    "Constant",
    "ProjectionFn",
    "project",
    "default_scale_map",
    "user_scale_map",
    "check_monotone",
    "check_projection",
)


class Band(NamedTuple):
    bound: float
    score: float


@dataclass(frozen=True, slots=True)
class NumericBands:
    """Piecewise-constant scoring of a numeric attribute.

    Bands are scanned in order; the first band whose bound covers the value wins.
    For lower-is-better a band covers values <= bound, for higher-is-better
    values >= bound. With `relative_to`, bounds are multipliers of the numeric
    value of that attribute on the same event.
    """

    direction: BandDirection
    bands: tuple[Band, ...]
    relative_to: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "bands", tuple(Band(float(b), float(s)) for b, s in self.bands)
        )


@dataclass(frozen=True, slots=True)
class CategoricalMap:
    scale: tuple[str, ...]
    scores: Mapping[str, float] = field(default_factory=dict)
    default_scheme: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", tuple(self.scale))
        object.__setattr__(self, "scores", MappingProxyType(dict(self.scores)))


@dataclass(frozen=True, slots=True)
class RuleRef:
    rule_name: str


@dataclass(frozen=True, slots=True)
class Constant:
    score: float


type ProjectionFn = NumericBands | CategoricalMap | RuleRef | Constant


def _band_scale(fn: NumericBands, bindings: Bindings | None) -> float:
    if fn.relative_to is None:
        return 1.0
    binding = (bindings or {}).get(fn.relative_to)
    if binding is None or binding.value is None:
        raise UnboundReferenceError(fn.relative_to, kind="val")
    return binding.value


def _project_bands(
    fn: NumericBands, value: AttributeValue, bindings: Bindings | None
) -> Metric:
    numeric = value.numeric
    if numeric is None:
        raise KindMismatchError(
            f"Attribute '{value.name}' is {value.kind}, numeric bands require a number."
        )
    scale = _band_scale(fn, bindings)

    for band in fn.bands:
        bound = band.bound if math.isinf(band.bound) else band.bound * scale
        match fn.direction:
            case "lower-is-better":
                covered = numeric <= bound + EPSILON
            case "higher-is-better":
                covered = numeric >= bound - EPSILON
            case _:  # pragma: no cover
                assert False, "This should never happen."
        if covered:
            return Metric(band.score)

    raise ValueError(  # pragma: no cover
        f"No band covers value {numeric} of attribute '{value.name}'."
    )


def project(
    fn: ProjectionFn | None,
    value: AttributeValue,
    rules: Mapping[str, RuleAst],
    bindings: Bindings | None = None,
) -> MetricValue:
    """Map an attribute value to its compliance score.

    Returns Null when no projection is given.
    `bindings` supplies the val/phi context for relative bands and rule projections.
    """
    match fn:
        case None:
            return None
        case NumericBands():
            return _project_bands(fn, value, bindings)
        case CategoricalMap(scale=scale, scores=scores):
            if not isinstance(value.value, Level):
                raise KindMismatchError(
                    f"Attribute '{value.name}' is {value.kind}, "
                    "categorical projection requires a level."
                )
            label = value.value.label
            if label not in scale:
                raise UnknownLevelError(
                    f"Level '{label}' of attribute '{value.name}' is not on scale {list(scale)}."
                )
            return Metric(scores[label])
        case RuleRef(rule_name=rule_name):
            if rule_name not in rules:
                raise UnboundReferenceError(rule_name, kind="rule")
            return evaluate_rule(rules[rule_name], bindings or {})
        case Constant(score=score):
            return Metric(score)
        case _:  # pragma: no cover
            assert False, "This should never happen."


def default_scale_map(levels: Sequence[str]) -> CategoricalMap:
    """Map an ordered scale of k levels onto 1/k, 2/k, ..., 1."""
    k = len(levels)
    if k < 2:
        raise EmptyScaleError(f"A scale needs at least two levels, got {k}.")
    if len(set(levels)) != k:
        raise ValueError(f"Scale levels must be distinct: {list(levels)}")
    return CategoricalMap(
        scale=tuple(levels),
        scores={level: i / k for i, level in enumerate(levels, start=1)},
        default_scheme=True,
    )


def user_scale_map(levels: Sequence[str], scores: Mapping[str, float]) -> CategoricalMap:
    if not levels:
        raise EmptyScaleError("A scale needs at least one level.")
    return CategoricalMap(scale=tuple(levels), scores=scores)


def _finding(code: str, path: str, message: str) -> Finding:
    return Finding(severity="error", code=code, path=path, message=message)


def _check_bands(fn: NumericBands, path: str) -> list[Finding]:
    bands_path = f"{path}.bands"
    if not fn.bands:
        return [_finding("EMPTY_BANDS", bands_path, "Numeric projection declares no bands.")]

    findings: list[Finding] = []
    lower_is_better = fn.direction == "lower-is-better"
    bounds = [band.bound for band in fn.bands]
    scores = [band.score for band in fn.bands]

    for i, score in enumerate(scores):
        if not 0.0 <= score <= 1.0:
            findings.append(
                _finding(
                    "SCORE_OUT_OF_RANGE",
                    f"{bands_path}[{i}]",
                    f"Band score {score} outside of [0, 1].",
                )
            )

    ordered = all(
        (left < right) if lower_is_better else (left > right)
        for left, right in zip(bounds, bounds[1:])
    )
    if not ordered:
        order = "increasing" if lower_is_better else "decreasing"
        findings.append(
            _finding(
                "BANDS_NOT_ORDERED",
                bands_path,
                f"Band bounds must be strictly {order} for {fn.direction}, got {bounds}.",
            )
        )

    terminal = math.inf if lower_is_better else -math.inf
    if bounds[-1] != terminal:
        findings.append(
            _finding(
                "BANDS_INCOMPLETE",
                bands_path,
                "The last band must be open-ended (null bound) to cover every value.",
            )
        )

    if any(left < right for left, right in zip(scores, scores[1:])):
        findings.append(
            _finding(
                "NON_MONOTONE_BANDS",
                bands_path,
                f"Band scores must not increase as values get worse, got {scores}.",
            )
        )

    return findings


def check_monotone(fn: ProjectionFn, path: str = "$") -> list[Finding]:
    """Check band ordering, completeness and monotonicity of scores.

    Projections other than NumericBands have no ordering and pass vacuously.
    """
    match fn:
        case NumericBands():
            return _check_bands(fn, path)
        case _:
            return []


def check_projection(fn: ProjectionFn, path: str = "$") -> list[Finding]:
    match fn:
        case NumericBands():
            return _check_bands(fn, path)
        case CategoricalMap(scale=scale, scores=scores):
            findings = [
                _finding(
                    "INCOMPLETE_SCALE",
                    f"{path}.scores",
                    f"Scale level '{level}' has no score.",
                )
                for level in scale
                if level not in scores
            ]
            findings.extend(
                _finding(
                    "SCORE_OUT_OF_RANGE",
                    f"{path}.scores.{level}",
                    f"Score {score} of level '{level}' outside of [0, 1].",
                )
                for level, score in scores.items()
                if not 0.0 <= score <= 1.0
            )
            return findings
        case Constant(score=score) if not 0.0 <= score <= 1.0:
            return [
                _finding(
                    "SCORE_OUT_OF_RANGE",
                    f"{path}.score",
                    f"Constant score {score} outside of [0, 1].",
                )
            ]
        case _:
            return []
