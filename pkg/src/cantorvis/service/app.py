"""HTTP facade over the core construction and certification routines.

Every endpoint is a stateless wrapper: parse the ``p/q`` strings, call
the core, serialize the result.  The CLI drives this app in-process
through an ASGI transport, so the command line and a deployed server
share one code path.

Domain errors map onto two statuses: 400 for inputs the core rejects
(bad values, resolution or capacity limits, infeasible covers) and 409
for honest refusals (inconclusive comparisons, enumeration budgets).
A verdict of ``false`` is a successful computation, not an error.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..davies import (
    DaviesConfig,
    DyadicFiltration,
    GoodSequence,
    assemble_c,
    build_bk_points,
    check_good,
    decomposition_check,
    restricted_cloud,
)
from ..errors import (
    BudgetExceeded,
    CantorvisError,
    CapacityError,
    Inconclusive,
    InfeasibleCover,
    InvalidInput,
    ResolutionExceeded,
)
from ..gaps import (
    DEFAULT_ENUM_BUDGET,
    GapFunction,
    GapSequence,
    build_cantor,
    middle_thirds,
    phi_from_alpha,
    recover_phi,
)
from ..gauges import (
    certified_constant,
    eval_gauge,
    measure_bracket,
    natural_cover_sum,
    synth_gauge,
)
from ..hausdorff import CompactRep, dense_approx
from ..intervals import RatInterval, as_fraction, format_fraction
from ..qlinear import is_independent, qpoint, rank, translate_overlap
from ..serialize import (
    assignment_from_json,
    assignment_to_json,
    compact_rep_to_json,
    cover_result_to_json,
    gap_function_from_json,
    gap_function_to_json,
    gap_rows,
    gauge_csv_rows,
    point_cloud_to_json,
)
from ..trees import (
    TAssignment,
    assignment_from_phi,
    check_l_intersection,
    check_regular,
    diameter_profile,
    validate_assignment,
)
from . import schemas

PRESETS = ("middle-thirds",)

# most specific first; a 409 is a refusal to answer, not a wrong answer
_ERROR_STATUS = (
    (BudgetExceeded, 409, "budget-exceeded"),
    (Inconclusive, 409, "inconclusive"),
    (InfeasibleCover, 400, "infeasible-cover"),
    (CapacityError, 400, "capacity"),
    (ResolutionExceeded, 400, "resolution-exceeded"),
    (CantorvisError, 400, "invalid-input"),
)


def _phi_from_source(
    source: schemas.SourceModel, resolution: int, budget: int = DEFAULT_ENUM_BUDGET
) -> GapFunction:
    if source.kind == "geometric":
        if source.ratio is None:
            raise InvalidInput("a geometric source needs a ratio")
        alpha = GapSequence.geometric(as_fraction(source.ratio))
        return phi_from_alpha(alpha, resolution, budget=budget)
    if source.kind == "explicit":
        if not source.terms:
            raise InvalidInput("an explicit source needs at least one term")
        alpha = GapSequence.explicit(
            [as_fraction(t) for t in source.terms], as_fraction(source.tail)
        )
        return phi_from_alpha(alpha, resolution, budget=budget)
    if source.kind == "preset":
        if source.preset not in PRESETS:
            raise InvalidInput(
                f"unknown preset {source.preset!r}; available: {', '.join(PRESETS)}"
            )
        return middle_thirds(resolution)
    if source.gap_function is None:
        raise InvalidInput("a gap-function source needs the gap_function payload")
    return gap_function_from_json(source.gap_function.model_dump())


def _resolve_assignment(
    assignment: schemas.AssignmentModel | None,
    source: schemas.SourceModel | None,
    depth: int | None,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> TAssignment:
    if assignment is not None and source is not None:
        raise InvalidInput("give either an assignment or a source, not both")
    if assignment is not None:
        return assignment_from_json(assignment.model_dump())
    if source is None:
        raise InvalidInput("give an assignment or a source")
    if depth is None:
        raise InvalidInput("a source needs a depth")
    if depth < 1:
        raise InvalidInput(f"depth must be >= 1, got {depth}")
    return assignment_from_phi(_phi_from_source(source, depth, budget), depth)


def _compact_from_model(model: schemas.CompactRepModel) -> CompactRep:
    if model.intervals is not None and model.points is not None:
        raise InvalidInput("a compact set is given by intervals or points, not both")
    if model.intervals is not None:
        return CompactRep.from_intervals(
            (RatInterval.of(iv.lo, iv.hi) for iv in model.intervals),
            provenance=dict(model.provenance),
        )
    if model.points is not None:
        return CompactRep.from_points(
            (as_fraction(p) for p in model.points), provenance=dict(model.provenance)
        )
    raise InvalidInput("a compact set needs intervals or points")


def _interval_payload(iv: RatInterval) -> dict:
    return {"lo": format_fraction(iv.lo), "hi": format_fraction(iv.hi)}


def create_app() -> FastAPI:
    app = FastAPI(title="cantorvis", version=__version__)

    @app.exception_handler(CantorvisError)
    async def domain_error(request: Request, exc: CantorvisError) -> JSONResponse:
        for klass, status, kind in _ERROR_STATUS:
            if isinstance(exc, klass):
                return JSONResponse(
                    status_code=status,
                    content={"error": {"kind": kind, "detail": str(exc)}},
                )
        raise exc  # pragma: no cover - _ERROR_STATUS ends with the base class

    @app.get("/version", response_model=schemas.VersionResponse)
    def version() -> dict:
        return {"name": "cantorvis", "version": __version__}

    @app.post("/construct", response_model=schemas.ConstructResponse)
    def construct(req: schemas.ConstructRequest) -> dict:
        resolution = req.depth if req.resolution is None else req.resolution
        if resolution < req.depth:
            raise InvalidInput(
                f"resolution {resolution} is below the requested depth {req.depth}"
            )
        budget = DEFAULT_ENUM_BUDGET if req.budget is None else req.budget
        phi = _phi_from_source(req.source, resolution, budget)
        stage = build_cantor(phi, req.depth)
        assignment = assignment_from_phi(phi, req.depth)
        return {
            "depth": stage.depth,
            "pieces": [_interval_payload(p) for p in stage.pieces],
            "gap_rows": gap_rows(stage),
            "gap_function": gap_function_to_json(phi),
            "assignment": assignment_to_json(assignment),
        }

    @app.post("/recover", response_model=schemas.GapFunctionModel)
    def recover(req: schemas.RecoverRequest) -> dict:
        gaps = [RatInterval.of(g.lo, g.hi) for g in req.gaps]
        return gap_function_to_json(recover_phi(gaps, req.resolution))

    @app.post("/certify", response_model=schemas.CertifyResponse)
    def certify(req: schemas.CertifyRequest) -> dict:
        budget = DEFAULT_ENUM_BUDGET if req.budget is None else req.budget
        a = _resolve_assignment(req.assignment, req.source, req.depth, budget)
        if req.branching is not None and req.branching != a.branching:
            raise InvalidInput(
                f"assignment branching is {a.branching}, request says {req.branching}"
            )
        report = validate_assignment(a)
        try:
            regular = "true" if check_regular(a) else "false"
        except Inconclusive:
            regular = "inconclusive"
        inter = check_l_intersection(a, req.l)
        j0, c = certified_constant(a.branching, req.l)

        payload: dict = {
            "regular": regular,
            "l": req.l,
            "l_intersection": "true" if inter.verdict else "false",
            "vacuous_levels": list(inter.vacuous_levels),
            "witness": None,
            "witness_level": inter.witness_level,
            "conditions": {
                name: {"verdict": cond.verdict, "detail": cond.detail}
                for name, cond in report.conditions.items()
            },
            "j0": j0,
            "c": format_fraction(c),
            "natural_cover_sums": None,
            "bracket": None,
        }
        if inter.witness is not None:
            payload["witness"] = {
                "center": format_fraction(inter.witness.center),
                "radius": format_fraction(inter.witness.radius),
            }
        # gauge-side quantities assume the four conditions hold; on a
        # broken assignment they are meaningless and may not even compute
        if regular == "true" and report.ok:
            gauge = synth_gauge(diameter_profile(a), a.branching)
            payload["natural_cover_sums"] = [
                _interval_payload(natural_cover_sum(a, gauge, k))
                for k in range(1, a.depth + 1)
            ]
            payload["bracket"] = cover_result_to_json(
                measure_bracket(a, gauge, a.depth)
            )

        states = [cond.verdict for cond in report.conditions.values()]
        states.append(regular)
        states.append(payload["l_intersection"])
        if any(s == "false" for s in states):
            payload["verdict"] = "false"
        elif any(s == "inconclusive" for s in states):
            payload["verdict"] = "inconclusive"
        else:
            payload["verdict"] = "true"
        return payload

    @app.post("/gauge", response_model=schemas.GaugeResponse)
    def gauge(req: schemas.GaugeRequest) -> dict:
        budget = DEFAULT_ENUM_BUDGET if req.budget is None else req.budget
        a = _resolve_assignment(req.assignment, req.source, req.depth, budget)
        synthesized = synth_gauge(diameter_profile(a), a.branching)
        grid = [as_fraction(t) for t in req.grid]
        if any(t < 0 for t in grid):
            raise InvalidInput("gauge arguments must be nonnegative")
        samples = [(t, eval_gauge(synthesized, t)) for t in grid]
        return {
            "plateaus": [
                {
                    "lo": format_fraction(lo),
                    "hi": format_fraction(hi),
                    "value": format_fraction(value),
                }
                for lo, hi, value in synthesized.plateaus
            ],
            "rows": gauge_csv_rows(samples),
        }

    @app.post("/measure", response_model=schemas.CoverModel)
    def measure(req: schemas.MeasureRequest) -> dict:
        budget = DEFAULT_ENUM_BUDGET if req.budget is None else req.budget
        a = _resolve_assignment(req.assignment, req.source, req.depth, budget)
        k = a.depth if req.k is None else req.k
        if not 1 <= k <= a.depth:
            raise InvalidInput(f"level {k} outside 1..{a.depth}")
        synthesized = synth_gauge(diameter_profile(a), a.branching)
        delta = None if req.delta is None else as_fraction(req.delta)
        return cover_result_to_json(measure_bracket(a, synthesized, k, delta))

    @app.post("/davies/build", response_model=schemas.DaviesBuildResponse)
    def davies_build(req: schemas.DaviesBuildRequest) -> dict:
        budget = DEFAULT_ENUM_BUDGET if req.budget is None else req.budget
        if req.blocks is not None:
            config = DaviesConfig.default(req.truncation, req.blocks)
            return {"cloud": point_cloud_to_json(assemble_c(config, budget=budget))}
        seq = GoodSequence.default(req.truncation)
        filtration = DyadicFiltration()
        if req.l is not None:
            restricted = restricted_cloud(seq, filtration, req.k, req.l, budget=budget)
            return {
                "cloud": point_cloud_to_json(restricted.c0),
                "u_values": [format_fraction(u) for u in restricted.u_values],
                "d_values": [format_fraction(d) for d in restricted.d_values],
            }
        return {
            "cloud": point_cloud_to_json(
                build_bk_points(seq, filtration, req.k, budget=budget)
            )
        }

    @app.post("/davies/check", response_model=schemas.DaviesCheckResponse)
    def davies_check(req: schemas.DaviesCheckRequest) -> dict:
        budget = DEFAULT_ENUM_BUDGET if req.budget is None else req.budget
        seq = GoodSequence.default(req.truncation)
        report = decomposition_check(
            seq, DyadicFiltration(), req.k, req.l, budget=budget
        )
        goodness = check_good(seq, budget=budget)
        collision = None
        if goodness.collision is not None:
            collision = [list(word) for word in goodness.collision]
        return {
            "verdict": report.verdict,
            "identity_u": report.identity_u,
            "identity_d": report.identity_d,
            "k": report.k,
            "l": report.l,
            "truncation": report.truncation,
            "goodness": {
                "verdict": goodness.verdict,
                "half_domination": goodness.half_domination,
                "distinct": goodness.distinct,
                "criterion": goodness.criterion,
                "collision": collision,
            },
        }

    @app.post("/qlinear/check", response_model=schemas.QlinearCheckResponse)
    def qlinear_check(req: schemas.QlinearCheckRequest) -> dict:
        points = [qpoint(row) for row in req.points]
        dimensions = {len(p) for p in points}
        if len(dimensions) > 1:
            raise InvalidInput("all points must share one dimension")
        dimension = dimensions.pop() if dimensions else 0
        payload: dict = {
            "independent": is_independent(points),
            "rank": rank(points),
            "count": len(points),
            "dimension": dimension,
            "overlap": None,
            "overlap_size": None,
        }
        if req.alpha is not None:
            alpha = qpoint(req.alpha)
            if points and len(alpha) != dimension:
                raise InvalidInput(
                    f"alpha has dimension {len(alpha)}, points have {dimension}"
                )
            overlap = translate_overlap(points, alpha)
            payload["overlap"] = [
                [format_fraction(c) for c in point] for point in overlap
            ]
            payload["overlap_size"] = len(overlap)
        return payload

    @app.post("/approx", response_model=schemas.ApproxResponse)
    def approx(req: schemas.ApproxRequest) -> dict:
        target = _compact_from_model(req.target)
        witness = dense_approx(target, as_fraction(req.epsilon), req.family)
        return {
            "family": str(witness.output.provenance["family"]),
            "epsilon": format_fraction(witness.epsilon),
            "distance": format_fraction(witness.distance),
            "within_epsilon": witness.within_epsilon,
            "translations": [format_fraction(t) for t in witness.translations],
            "seed": compact_rep_to_json(witness.seed),
            "output": compact_rep_to_json(witness.output),
        }

    return app


app = create_app()
