"""Command-line front end.

The CLI is a thin client of the HTTP service: every subcommand builds a
JSON request, posts it, and serializes the response to the requested
files.  By default the service app runs in-process over an ASGI
transport, so no server or network is involved; ``--server URL`` points
the same client at a deployed instance instead.

Exit codes: 0 verdict true / success, 1 verdict false, 2 usage or
validation error, 3 inconclusive or over-budget refusal.

Outputs are deterministic: canonical JSON (sorted structure is fixed by
the service, rationals are reduced ``p/q`` strings) and no timestamps,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import httpx

from . import __version__
from .serialize import dumps

DEFAULT_ENUM_BUDGET = 2**20
BUDGET_ENV_VAR = "CANTOR_GAUGE_BUDGET"

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class CliFailure(Exception):
    """Abort the command with a message on stderr and a specific code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# Service client
# ---------------------------------------------------------------------------


def request(
    server: str | None, method: str, path: str, payload: dict | None = None
) -> tuple[int, Any]:
    """One HTTP round trip; in-process unless a server URL is given."""

    async def go() -> tuple[int, Any]:
        if server is None:
            from .service import create_app

            transport = httpx.ASGITransport(app=create_app())
            client = httpx.AsyncClient(transport=transport, base_url="http://cantorvis")
        else:
            client = httpx.AsyncClient(base_url=server, timeout=120.0)
        async with client:
            response = await client.request(method, path, json=payload)
            try:
                body = response.json()
            except (json.JSONDecodeError, ValueError):
                body = {"error": {"kind": "protocol", "detail": response.text}}
            return response.status_code, body

    try:
        return asyncio.run(go())
    except httpx.HTTPError as exc:
        raise CliFailure(EXIT_USAGE, f"cannot reach {server}: {exc}") from exc


def check_response(status: int, body: Any) -> Any:
    """Return the body of a 200 response, raise CliFailure otherwise."""
    if status == 200:
        return body
    if isinstance(body, dict) and "error" in body:
        kind = body["error"].get("kind", "error")
        detail = body["error"].get("detail", "")
    else:
        # pydantic validation errors arrive as FastAPI's {"detail": [...]}
        kind = "invalid-input"
        detail = json.dumps(body.get("detail", body)) if isinstance(body, dict) else str(body)
    code = EXIT_INCONCLUSIVE if status == 409 else EXIT_USAGE
    raise CliFailure(code, f"{kind}: {detail}")


# ---------------------------------------------------------------------------
# Small I/O helpers
# ---------------------------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliFailure(EXIT_USAGE, f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliFailure(EXIT_USAGE, f"corrupted JSON in {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliFailure(EXIT_USAGE, f"cannot write {path}: {exc}") from exc


def _emit_json(doc: Any, path: str | None, outputs: list[str]) -> None:
    """Write canonical JSON to a file, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(dumps(doc))
    else:
        _write_text(path, dumps(doc))
        outputs.append(path)


def _emit_csv(
    rows: Sequence[dict], fieldnames: Sequence[str], path: str | None, outputs: list[str]
) -> None:
    def write(stream) -> None:
        writer = csv.DictWriter(stream, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    if path is None:
        write(sys.stdout)
    else:
        try:
            with open(path, "w", newline="") as stream:
                write(stream)
        except OSError as exc:
            raise CliFailure(EXIT_USAGE, f"cannot write {path}: {exc}") from exc
        outputs.append(path)


def _write_manifest(
    args: argparse.Namespace,
    parameters: dict,
    inputs: list[str],
    outputs: list[str],
    verdicts: dict[str, str],
) -> None:
    path = getattr(args, "manifest", None)
    if path is None:
        return
    doc = {
        "command": args.command if args.command != "davies" else f"davies {args.davies_command}",
        "parameters": parameters,
        "inputs": sorted(inputs),
        "outputs": sorted(outputs),
        "version": __version__,
        "verdicts": verdicts,
    }
    _write_text(path, dumps(doc))


def _verdict_str(value: bool | str) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def _resolve_budget(args: argparse.Namespace) -> int | None:
    """Precedence: subcommand --max-enum, then --budget, then the env var."""
    for attr in ("max_enum", "budget"):
        value = getattr(args, attr, None)
        if value is not None:
            if value < 1:
                raise CliFailure(EXIT_USAGE, f"budget must be positive, got {value}")
            return value
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliFailure(
                EXIT_USAGE, f"{BUDGET_ENV_VAR} must be an integer, got {env!r}"
            ) from None
    return None


# ---------------------------------------------------------------------------
# Construction sources
# ---------------------------------------------------------------------------


def _source_payload(args: argparse.Namespace, inputs: list[str]) -> dict:
    chosen = [
        name
        for name, value in (
            ("--alpha", args.alpha),
            ("--preset", args.preset),
            ("--phi", args.phi),
        )
        if value is not None
    ]
    if len(chosen) != 1:
        raise CliFailure(
            EXIT_USAGE, "give exactly one of --alpha, --preset, --phi"
        )
    if args.alpha is not None:
        kind, sep, rest = args.alpha.partition(":")
        if kind == "geometric" and sep and rest:
            return {"kind": "geometric", "ratio": rest}
        if kind == "explicit" and sep and rest:
            terms = [t.strip() for t in rest.split(",") if t.strip()]
            if not terms:
                raise CliFailure(EXIT_USAGE, "explicit sequence needs terms")
            return {"kind": "explicit", "terms": terms, "tail": args.tail}
        raise CliFailure(
            EXIT_USAGE,
            f"bad --alpha {args.alpha!r}; use geometric:<p/q> or explicit:<p/q,p/q,...>",
        )
    if args.preset is not None:
        return {"kind": "preset", "preset": args.preset}
    inputs.append(args.phi)
    return {"kind": "gap-function", "gap_function": _read_json(args.phi)}


def _assignment_or_source(args: argparse.Namespace, inputs: list[str]) -> dict:
    """The certify/gauge/measure commands accept either input shape."""
    payload: dict = {}
    if args.assignment is not None:
        if args.alpha or args.preset or args.phi:
            raise CliFailure(
                EXIT_USAGE, "--assignment excludes --alpha/--preset/--phi"
            )
        inputs.append(args.assignment)
        payload["assignment"] = _read_json(args.assignment)
    else:
        payload["source"] = _source_payload(args, inputs)
        if args.depth is None:
            raise CliFailure(EXIT_USAGE, "a construction source needs --depth")
        payload["depth"] = args.depth
    return payload


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def cmd_construct(args: argparse.Namespace) -> int:
    inputs: list[str] = []
    payload: dict = {"source": _source_payload(args, inputs), "depth": args.depth}
    if args.resolution is not None:
        payload["resolution"] = args.resolution
    budget = _resolve_budget(args)
    if budget is not None:
        payload["budget"] = budget
    body = check_response(*request(args.server, "POST", "/construct", payload))

    outputs: list[str] = []
    approx_doc = {"depth": body["depth"], "pieces": body["pieces"]}
    _emit_json(approx_doc, args.out, outputs)
    if args.gaps_out is not None:
        _emit_csv(
            body["gap_rows"], ("level", "num", "lo", "hi", "mass"), args.gaps_out, outputs
        )
    if args.phi_out is not None:
        _emit_json(body["gap_function"], args.phi_out, outputs)
    if args.assignment_out is not None:
        _emit_json(body["assignment"], args.assignment_out, outputs)
    _write_manifest(
        args,
        {"depth": args.depth, "resolution": args.resolution, "source": payload["source"]},
        inputs,
        outputs,
        {},
    )
    return EXIT_TRUE


def cmd_recover(args: argparse.Namespace) -> int:
    data = _read_json(args.gaps)
    if isinstance(data, dict):
        data = data.get("gaps", data.get("gaps_removed"))
    if not isinstance(data, list):
        raise CliFailure(
            EXIT_USAGE, f"{args.gaps} must hold a list of gaps or a 'gaps' key"
        )
    gaps = [
        {"lo": item["lo"], "hi": item["hi"]} if isinstance(item, dict) else item
        for item in data
    ]
    payload = {"gaps": gaps, "resolution": args.resolution}
    body = check_response(*request(args.server, "POST", "/recover", payload))
    outputs: list[str] = []
    _emit_json(body, args.out, outputs)
    _write_manifest(
        args, {"resolution": args.resolution}, [args.gaps], outputs, {}
    )
    return EXIT_TRUE


def cmd_certify(args: argparse.Namespace) -> int:
    inputs: list[str] = []
    payload = _assignment_or_source(args, inputs)
    payload["l"] = args.l
    if args.branching is not None:
        payload["branching"] = args.branching
    budget = _resolve_budget(args)
    if budget is not None:
        payload["budget"] = budget
    body = check_response(*request(args.server, "POST", "/certify", payload))

    print(
        "certify: verdict={verdict} regular={regular} l-intersection={li} "
        "j0={j0} c={c}".format(
            verdict=body["verdict"],
            regular=body["regular"],
            li=body["l_intersection"],
            j0=body["j0"],
            c=body["c"],
        )
    )
    if body["bracket"] is not None:
        bracket = body["bracket"]
        print(
            "measure bracket: [{lo}, {hi}] at delta={delta}".format(
                lo=bracket["value_lo"], hi=bracket["value_hi"], delta=bracket["delta"]
            )
        )
    outputs: list[str] = []
    if args.report_out is not None:
        _emit_json(body, args.report_out, outputs)
    _write_manifest(
        args,
        {"l": args.l, "branching": args.branching},
        inputs,
        outputs,
        {
            "verdict": body["verdict"],
            "regular": body["regular"],
            "l_intersection": body["l_intersection"],
        },
    )
    if body["verdict"] == "true":
        return EXIT_TRUE
    if body["verdict"] == "false":
        return EXIT_FALSE
    return EXIT_INCONCLUSIVE


def cmd_gauge(args: argparse.Namespace) -> int:
    inputs: list[str] = []
    payload = _assignment_or_source(args, inputs)
    payload["grid"] = [t.strip() for t in args.grid.split(",") if t.strip()]
    if not payload["grid"]:
        raise CliFailure(EXIT_USAGE, "--grid needs at least one rational")
    budget = _resolve_budget(args)
    if budget is not None:
        payload["budget"] = budget
    body = check_response(*request(args.server, "POST", "/gauge", payload))
    outputs: list[str] = []
    _emit_csv(body["rows"], ("t", "h_lo", "h_hi"), args.out, outputs)
    if args.plateaus_out is not None:
        _emit_json(body["plateaus"], args.plateaus_out, outputs)
    _write_manifest(args, {"grid": payload["grid"]}, inputs, outputs, {})
    return EXIT_TRUE


def cmd_measure(args: argparse.Namespace) -> int:
    inputs: list[str] = []
    payload = _assignment_or_source(args, inputs)
    if args.k is not None:
        payload["k"] = args.k
    if args.delta is not None:
        payload["delta"] = args.delta
    budget = _resolve_budget(args)
    if budget is not None:
        payload["budget"] = budget
    body = check_response(*request(args.server, "POST", "/measure", payload))
    outputs: list[str] = []
    _emit_json(body, args.out, outputs)
    _write_manifest(args, {"k": args.k, "delta": args.delta}, inputs, outputs, {})
    return EXIT_TRUE


def cmd_davies_build(args: argparse.Namespace) -> int:
    payload: dict = {"truncation": args.truncation, "k": args.k}
    if args.l is not None:
        payload["l"] = args.l
    if args.blocks is not None:
        payload["blocks"] = args.blocks
    budget = _resolve_budget(args)
    if budget is not None:
        payload["budget"] = budget
    body = check_response(*request(args.server, "POST", "/davies/build", payload))
    outputs: list[str] = []
    doc = dict(body["cloud"])
    if body.get("u_values") is not None:
        doc["u_values"] = body["u_values"]
        doc["d_values"] = body["d_values"]
    _emit_json(doc, args.out, outputs)
    _write_manifest(
        args,
        {"truncation": args.truncation, "k": args.k, "l": args.l, "blocks": args.blocks},
        [],
        outputs,
        {},
    )
    return EXIT_TRUE


def cmd_davies_check(args: argparse.Namespace) -> int:
    payload: dict = {"truncation": args.truncation, "k": args.k, "l": args.l}
    budget = _resolve_budget(args)
    if budget is not None:
        payload["budget"] = budget
    body = check_response(*request(args.server, "POST", "/davies/check", payload))
    print(
        "davies check: verdict={v} identity_u={u} identity_d={d} "
        "sequence={g} ({criterion})".format(
            v=_verdict_str(body["verdict"]),
            u=_verdict_str(body["identity_u"]),
            d=_verdict_str(body["identity_d"]),
            g=_verdict_str(body["goodness"]["verdict"]),
            criterion=body["goodness"]["criterion"],
        )
    )
    outputs: list[str] = []
    if args.report_out is not None:
        _emit_json(body, args.report_out, outputs)
    _write_manifest(
        args,
        {"truncation": args.truncation, "k": args.k, "l": args.l},
        [],
        outputs,
        {
            "verdict": _verdict_str(body["verdict"]),
            "identity_u": _verdict_str(body["identity_u"]),
            "identity_d": _verdict_str(body["identity_d"]),
        },
    )
    return EXIT_TRUE if body["verdict"] else EXIT_FALSE


def cmd_qlinear_check(args: argparse.Namespace) -> int:
    data = _read_json(args.file)
    alpha = None
    if isinstance(data, dict):
        alpha = data.get("alpha")
        data = data.get("points")
    if not isinstance(data, list):
        raise CliFailure(
            EXIT_USAGE, f"{args.file} must hold a matrix of rationals or a 'points' key"
        )
    if args.alpha is not None:
        alpha = [t.strip() for t in args.alpha.split(",") if t.strip()]
    payload: dict = {"points": data}
    if alpha is not None:
        payload["alpha"] = alpha
    body = check_response(*request(args.server, "POST", "/qlinear/check", payload))
    line = "qlinear check: independent={i} rank={r} count={c}".format(
        i=_verdict_str(body["independent"]), r=body["rank"], c=body["count"]
    )
    if body["overlap_size"] is not None:
        line += f" overlap={body['overlap_size']}"
    print(line)
    outputs: list[str] = []
    if args.report_out is not None:
        _emit_json(body, args.report_out, outputs)
    _write_manifest(
        args,
        {"alpha": alpha},
        [args.file],
        outputs,
        {"independent": _verdict_str(body["independent"])},
    )
    return EXIT_TRUE if body["independent"] else EXIT_FALSE


def cmd_approx(args: argparse.Namespace) -> int:
    target = _read_json(args.target)
    if isinstance(target, list):
        target = {"points": target}
    if not isinstance(target, dict):
        raise CliFailure(
            EXIT_USAGE, f"{args.target} must hold a compact set (intervals or points)"
        )
    payload = {
        "target": {k: target.get(k) for k in ("intervals", "points") if k in target},
        "epsilon": args.epsilon,
        "family": args.family,
    }
    body = check_response(*request(args.server, "POST", "/approx", payload))
    print(
        "approx: family={f} translates={n} distance={d} epsilon={e} within={w}".format(
            f=body["family"],
            n=len(body["translations"]),
            d=body["distance"],
            e=body["epsilon"],
            w=_verdict_str(body["within_epsilon"]),
        )
    )
    outputs: list[str] = []
    _emit_json(body["output"], args.out, outputs)
    if args.report_out is not None:
        _emit_json(body, args.report_out, outputs)
    _write_manifest(
        args,
        {"epsilon": args.epsilon, "family": args.family},
        [args.target],
        outputs,
        {"within_epsilon": _verdict_str(body["within_epsilon"])},
    )
    return EXIT_TRUE if body["within_epsilon"] else EXIT_FALSE


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_TRUE


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_source_flags(parser: argparse.ArgumentParser, with_assignment: bool) -> None:
    parser.add_argument(
        "--alpha",
        help="gap sequence, geometric:<p/q> or explicit:<p/q,p/q,...>",
    )
    parser.add_argument("--tail", default="0/1", help="tail mass for explicit sequences")
    parser.add_argument("--preset", help="named gap function (middle-thirds)")
    parser.add_argument("--phi", help="path to a gap-function JSON file")
    if with_assignment:
        parser.add_argument("--assignment", help="path to an assignment JSON file")
        parser.add_argument(
            "--depth", type=int, help="construction depth when building from a source"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorvis",
        description="Exact finite-depth Cantor constructions, gauge synthesis, "
        "certified measure brackets, and translation combinatorics.",
    )
    parser.add_argument("--version", action="version", version=f"cantorvis {__version__}")
    parser.add_argument(
        "--server",
        help="URL of a running service; default runs the service in-process",
    )
    parser.add_argument(
        "--budget",
        type=int,
        help=f"cap on exhaustive enumerations (default 2^20; env {BUDGET_ENV_VAR})",
    )
    parser.add_argument("--manifest", help="write a JSON run manifest to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a finite-depth construction stage")
    _add_source_flags(p, with_assignment=False)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--resolution", type=int, help="stored gap resolution (default: depth)")
    p.add_argument("--out", help="pieces JSON (default: stdout)")
    p.add_argument("--gaps-out", help="removed-gaps CSV")
    p.add_argument("--phi-out", help="gap-function JSON")
    p.add_argument("--assignment-out", help="assignment JSON for certify/gauge/measure")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("recover", help="rebuild a gap function from observed gaps")
    p.add_argument("--gaps", required=True, help="JSON list of {lo,hi} gaps")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--out", help="gap-function JSON (default: stdout)")
    p.set_defaults(handler=cmd_recover)

    p = sub.add_parser("certify", help="check the visibility hypotheses")
    _add_source_flags(p, with_assignment=True)
    p.add_argument("--l", type=int, required=True, help="intersection arity (>= 2)")
    p.add_argument("--branching", type=int, help="cross-check the assignment branching")
    p.add_argument("--report-out", help="full JSON report")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("gauge", help="sample the synthesized gauge on a grid")
    _add_source_flags(p, with_assignment=True)
    p.add_argument("--grid", required=True, help="comma-separated rationals")
    p.add_argument("--out", help="CSV of t,h_lo,h_hi (default: stdout)")
    p.add_argument("--plateaus-out", help="plateau JSON")
    p.set_defaults(handler=cmd_gauge)

    p = sub.add_parser("measure", help="certified minimum-cover bracket")
    _add_source_flags(p, with_assignment=True)
    p.add_argument("--k", type=int, help="level to cover (default: deepest)")
    p.add_argument("--delta", help="diameter cap p/q (default: level max diameter)")
    p.add_argument("--out", help="cover JSON (default: stdout)")
    p.set_defaults(handler=cmd_measure)

    p = sub.add_parser("davies", help="invisible-set point clouds")
    davies_sub = p.add_subparsers(dest="davies_command", required=True)

    b = davies_sub.add_parser("build", help="emit a point cloud")
    b.add_argument("--truncation", type=int, required=True)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--l", type=int, help="restrict l coordinates (emits the C0 cloud)")
    b.add_argument("--blocks", type=int, help="assemble this many anchored blocks")
    b.add_argument("--max-enum", type=int, help="alias for --budget")
    b.add_argument("--out", help="point-cloud JSON (default: stdout)")
    b.set_defaults(handler=cmd_davies_build)

    c = davies_sub.add_parser("check", help="verify both decomposition identities")
    c.add_argument("--truncation", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--max-enum", type=int, help="alias for --budget")
    c.add_argument("--report-out", help="full JSON report")
    c.set_defaults(handler=cmd_davies_check)

    p = sub.add_parser("qlinear", help="rational linear independence")
    qlinear_sub = p.add_subparsers(dest="qlinear_command", required=True)
    q = qlinear_sub.add_parser("check", help="check a matrix of rationals")
    q.add_argument("--file", required=True, help="JSON matrix, or {points, alpha}")
    q.add_argument("--alpha", help="comma-separated shift vector")
    q.add_argument("--report-out", help="full JSON report")
    q.set_defaults(handler=cmd_qlinear_check)

    p = sub.add_parser("approx", help="dense approximation of a compact target")
    p.add_argument("--target", required=True, help="compact-set JSON")
    p.add_argument("--epsilon", required=True, help="distance bound p/q")
    p.add_argument(
        "--family",
        required=True,
        help="seed family: visible (ternary piece) or invisible (scaled cloud)",
    )
    p.add_argument("--out", help="output compact-set JSON (default: stdout)")
    p.add_argument("--report-out", help="full witness JSON")
    p.set_defaults(handler=cmd_approx)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliFailure as failure:
        print(f"cantorvis: {failure}", file=sys.stderr)
        _write_manifest(args, {}, [], [], {"outcome": "error"})
        return failure.code


if __name__ == "__main__":
    sys.exit(main())
