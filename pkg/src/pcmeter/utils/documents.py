"""Strict pydantic models for spec and log documents.

Documents are validated in JSON mode with strict=True, so a string "0.3"
is rejected where a number is expected.
"""

from typing import Annotated, Literal as PyLiteral

from pydantic import BaseModel, ConfigDict, Field

from pcmeter.types import AggregatorKind, BandDirection, Unit


class _Document(BaseModel):
    model_config = ConfigDict(
        strict=True, extra="forbid", frozen=True, populate_by_name=True
    )


class DimensionDocument(_Document):
    cutoff: float
    threshold: float
    weight: float | None = None


class AggregatorDocument(_Document):
    kind: AggregatorKind
    rule: str | None = None


type AggregatorField = AggregatorKind | AggregatorDocument


class AggregatorsDocument(_Document):
    attribute: AggregatorField = "average"
    dimension: AggregatorField = "average"
    trace: AggregatorField = "average"


class BandsProjectionDocument(_Document):
    kind: PyLiteral["bands"]
    direction: BandDirection = "lower-is-better"
    bands: list[tuple[float | None, float]]
    relative_to: str | None = Field(default=None, alias="relativeTo")


class CategoricalProjectionDocument(_Document):
    kind: PyLiteral["categorical"]
    scale: list[str]
    scores: dict[str, float] | None = None


class RuleProjectionDocument(_Document):
    kind: PyLiteral["rule"]
    rule: str


class ConstantProjectionDocument(_Document):
    kind: PyLiteral["constant"]
    score: float


type ProjectionDocument = Annotated[
    BandsProjectionDocument
    | CategoricalProjectionDocument
    | RuleProjectionDocument
    | ConstantProjectionDocument,
    Field(discriminator="kind"),
]


class AttributeDocument(_Document):
    task: str = Field(min_length=1)
    name: str = Field(min_length=1)
    dimension: str = Field(min_length=1)
    weight: float = 1.0
    meta: bool = False
    cutoff: float | None = None
    threshold: float | None = None
    projection: ProjectionDocument | None = None


class SpecDocument(_Document):
    spec_id: str = Field(alias="specId", min_length=1)
    dimensions: dict[str, DimensionDocument] = Field(default_factory=dict)
    aggregators: AggregatorsDocument = Field(default_factory=AggregatorsDocument)
    rules: dict[str, str] = Field(default_factory=dict)
    attributes: list[AttributeDocument]


class QuantityDocument(_Document):
    value: float
    unit: Unit = "none"


class LevelDocument(_Document):
    level: str


class TextDocument(_Document):
    """Explicit text, for strings that would otherwise read as ISO dates."""

    text: str


type AttributeValueDocument = (
    float | str | LevelDocument | QuantityDocument | TextDocument
)


class EventDocument(_Document):
    task: str = Field(min_length=1)
    attrs: dict[str, AttributeValueDocument] = Field(default_factory=dict)


class TraceDocument(_Document):
    trace_id: str = Field(alias="traceId", min_length=1)
    events: list[EventDocument] = Field(min_length=1)
