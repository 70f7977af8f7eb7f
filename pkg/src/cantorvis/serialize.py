"""Canonical wire formats.

Every rational crosses process boundaries as a reduced ``p/q`` string
with a positive denominator; floats never appear.  Dict keys are emitted
in a fixed order so identical inputs serialize to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .davies import PointCloud
from .errors import InvalidInput
from .gaps import CantorApprox, Dyadic, GapFunction
from .gauges import CoverResult
from .hausdorff import CompactRep
from .intervals import RatInterval, as_fraction, format_fraction
from .trees import TAssignment


def encode_value(value: Any) -> Any:
    """Recursively map Fractions to ``p/q`` strings inside plain containers."""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return value
    if value is None:
        return None
    if isinstance(value, Mapping):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    raise InvalidInput(f"cannot serialize {type(value).__name__}")


def dumps(payload: Any) -> str:
    """Canonical JSON text: two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# -- gap functions -----------------------------------------------------------


def gap_function_to_json(phi: GapFunction) -> dict:
    ordered = sorted(phi.values.items(), key=lambda kv: (kv[0].level, kv[0].num))
    return {
        "resolution": phi.resolution,
        "values": [
            {"num": d.num, "level": d.level, "mass": format_fraction(mass)}
            for d, mass in ordered
        ],
        "residuals": [format_fraction(r) for r in phi.residuals],
    }


def gap_function_from_json(data: Mapping) -> GapFunction:
    try:
        resolution = int(data["resolution"])
        values = {
            Dyadic(int(item["num"]), int(item["level"])): as_fraction(item["mass"])
            for item in data["values"]
        }
        residuals = [as_fraction(r) for r in data["residuals"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed gap function payload: {exc}") from exc
    return GapFunction(resolution, values, residuals)


# -- assignments --------------------------------------------------------------


def _interval_to_json(iv: RatInterval) -> dict:
    return {"lo": format_fraction(iv.lo), "hi": format_fraction(iv.hi)}


def _interval_from_json(data: Mapping) -> RatInterval:
    try:
        return RatInterval.of(data["lo"], data["hi"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed interval payload: {exc}") from exc


def assignment_to_json(assignment: TAssignment) -> dict:
    return {
        "branching": assignment.branching,
        "levels": [
            [_interval_to_json(iv) for iv in level] for level in assignment.levels
        ],
    }


def assignment_from_json(data: Mapping) -> TAssignment:
    try:
        branching = int(data["branching"])
        levels = tuple(
            tuple(_interval_from_json(item) for item in level)
            for level in data["levels"]
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed assignment payload: {exc}") from exc
    return TAssignment(branching=branching, levels=levels)


# -- point clouds and compacta -------------------------------------------------


def point_cloud_to_json(cloud: PointCloud) -> dict:
    return {
        "points": [format_fraction(p) for p in cloud.points],
        "provenance": encode_value(dict(cloud.provenance)),
    }


def point_cloud_from_json(data: Mapping) -> PointCloud:
    try:
        points = tuple(as_fraction(p) for p in data["points"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed point cloud payload: {exc}") from exc
    return PointCloud(points=points, provenance=dict(data.get("provenance", {})))


def compact_rep_to_json(rep: CompactRep) -> dict:
    return {
        "intervals": [_interval_to_json(iv) for iv in rep.intervals],
        "provenance": encode_value(dict(rep.provenance)),
    }


def compact_rep_from_json(data: Mapping) -> CompactRep:
    try:
        intervals = [_interval_from_json(item) for item in data["intervals"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed compact set payload: {exc}") from exc
    return CompactRep.from_intervals(intervals, provenance=dict(data.get("provenance", {})))


# -- construction stages and covers --------------------------------------------


def approx_to_json(stage: CantorApprox) -> dict:
    return {
        "depth": stage.depth,
        "pieces": [_interval_to_json(p) for p in stage.pieces],
    }


def gap_rows(stage: CantorApprox) -> list[dict]:
    """CSV-ready gap records sorted by (level, position)."""
    return [
        {
            "level": d.level,
            "num": d.num,
            "lo": format_fraction(gap.lo),
            "hi": format_fraction(gap.hi),
            "mass": format_fraction(gap.width),
        }
        for d, gap in stage.gaps_removed
    ]


def cover_result_to_json(result: CoverResult) -> dict:
    return {
        "value_lo": format_fraction(result.value_lo),
        "value_hi": format_fraction(result.value_hi),
        "delta": format_fraction(result.delta),
        "depth": result.depth,
        "certificate": [{"start": i, "end": j} for i, j in result.runs],
    }


def gauge_csv_rows(samples: Sequence[tuple[Fraction, RatInterval]]) -> list[dict]:
    return [
        {
            "t": format_fraction(t),
            "h_lo": format_fraction(value.lo),
            "h_hi": format_fraction(value.hi),
        }
        for t, value in samples
    ]
