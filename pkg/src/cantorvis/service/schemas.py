"""Request/response shapes for the HTTP surface.

Rationals travel as reduced ``p/q`` strings.  These models pin the JSON
structure only; the core package parses the strings and enforces the
mathematical invariants, so value errors surface as 400s with module
context rather than bare 422s.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class IntervalModel(BaseModel):
    lo: str
    hi: str


class GapValueModel(BaseModel):
    num: int
    level: int
    mass: str


class GapFunctionModel(BaseModel):
    resolution: int
    values: list[GapValueModel]
    residuals: list[str]


class AssignmentModel(BaseModel):
    branching: int
    levels: list[list[IntervalModel]]


class SourceModel(BaseModel):
    """Where a construction comes from.

    ``geometric`` and ``explicit`` describe a gap sequence, ``preset``
    names a built-in gap function, and ``gap-function`` supplies the raw
    masses directly.
    """

    kind: Literal["geometric", "explicit", "preset", "gap-function"]
    ratio: str | None = None
    terms: list[str] | None = None
    tail: str = "0"
    preset: str | None = None
    gap_function: GapFunctionModel | None = None


class GapRowModel(BaseModel):
    level: int
    num: int
    lo: str
    hi: str
    mass: str


class ConstructRequest(BaseModel):
    source: SourceModel
    depth: int = Field(ge=1)
    resolution: int | None = None
    budget: int | None = None


class ConstructResponse(BaseModel):
    depth: int
    pieces: list[IntervalModel]
    gap_rows: list[GapRowModel]
    gap_function: GapFunctionModel
    assignment: AssignmentModel


class RecoverRequest(BaseModel):
    gaps: list[IntervalModel]
    resolution: int = Field(ge=1)


class BallModel(BaseModel):
    center: str
    radius: str


class ConditionModel(BaseModel):
    verdict: str
    detail: str


class RunModel(BaseModel):
    start: int
    end: int


class CoverModel(BaseModel):
    value_lo: str
    value_hi: str
    delta: str
    depth: int
    certificate: list[RunModel]


class CertifyRequest(BaseModel):
    assignment: AssignmentModel | None = None
    source: SourceModel | None = None
    depth: int | None = None
    l: int = Field(ge=2)
    branching: int | None = None
    budget: int | None = None


class CertifyResponse(BaseModel):
    verdict: str
    regular: str
    l: int
    l_intersection: str
    vacuous_levels: list[int]
    witness: BallModel | None = None
    witness_level: int | None = None
    conditions: dict[str, ConditionModel]
    j0: int
    c: str
    natural_cover_sums: list[IntervalModel] | None = None
    bracket: CoverModel | None = None


class GaugeRequest(BaseModel):
    assignment: AssignmentModel | None = None
    source: SourceModel | None = None
    depth: int | None = None
    grid: list[str]
    budget: int | None = None


class PlateauModel(BaseModel):
    lo: str
    hi: str
    value: str


class GaugeSampleModel(BaseModel):
    t: str
    h_lo: str
    h_hi: str


class GaugeResponse(BaseModel):
    plateaus: list[PlateauModel]
    rows: list[GaugeSampleModel]


class MeasureRequest(BaseModel):
    assignment: AssignmentModel | None = None
    source: SourceModel | None = None
    depth: int | None = None
    k: int | None = None
    delta: str | None = None
    budget: int | None = None


class PointCloudModel(BaseModel):
    points: list[str]
    provenance: dict[str, Any] = {}


class DaviesBuildRequest(BaseModel):
    truncation: int = Field(ge=1)
    k: int = Field(ge=1, default=1)
    l: int | None = None
    blocks: int | None = None
    budget: int | None = None


class DaviesBuildResponse(BaseModel):
    cloud: PointCloudModel
    u_values: list[str] | None = None
    d_values: list[str] | None = None


class GoodnessModel(BaseModel):
    verdict: bool
    half_domination: bool
    distinct: bool | None
    criterion: str
    collision: list[list[int]] | None = None


class DaviesCheckRequest(BaseModel):
    truncation: int = Field(ge=1)
    k: int = Field(ge=1)
    l: int = Field(ge=1)
    budget: int | None = None


class DaviesCheckResponse(BaseModel):
    verdict: bool
    identity_u: bool
    identity_d: bool
    k: int
    l: int
    truncation: int
    goodness: GoodnessModel


class QlinearCheckRequest(BaseModel):
    points: list[list[str]]
    alpha: list[str] | None = None


class QlinearCheckResponse(BaseModel):
    independent: bool
    rank: int
    count: int
    dimension: int
    overlap: list[list[str]] | None = None
    overlap_size: int | None = None


class CompactRepModel(BaseModel):
    intervals: list[IntervalModel] | None = None
    points: list[str] | None = None
    provenance: dict[str, Any] = {}


class ApproxRequest(BaseModel):
    target: CompactRepModel
    epsilon: str
    family: str


class ApproxResponse(BaseModel):
    family: str
    epsilon: str
    distance: str
    within_epsilon: bool
    translations: list[str]
    seed: CompactRepModel
    output: CompactRepModel


class VersionResponse(BaseModel):
    name: str
    version: str


class ErrorDetail(BaseModel):
    kind: str
    detail: str


class ErrorResponse(BaseModel):
    error: ErrorDetail
