"""Command-line front door over the service handlers.

Subcommands: constants | bound | landau | verify | table. Each one builds
the matching request model, runs it in-process by default or POSTs it to a
running server when --server is given, and renders the response as JSON
(17 significant digits on every float) or RFC-quoted CSV with a mandatory
header row. Identical invocations produce byte-identical output.

Exit codes: 0 success, 1 verification/tolerance failure, 2 usage error.
"""

import argparse
import csv
import io
import json
import math
import sys

import httpx

from .service import (
    BoundRequest,
    ConstantsRequest,
    ConstantsRow,
    LandauRequest,
    TableRequest,
    VerifyRequest,
    compute_bound,
    compute_constants,
    compute_landau,
    compute_table,
    run_verify,
)


class UsageError(ValueError):
    """Bad flags or bad domain values; maps to exit code 2."""


# ------------------------------------------------------------- rendering


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v} in output")
        return format(v, ".17g")
    if isinstance(v, int):
        return str(v)
    if v is None:
        return ""
    return str(v)


def render_json(obj, indent: int = 0) -> str:
    """JSON with every float carrying 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {render_json(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    return _scalar(obj)


def render_csv(command: str, payload: dict) -> str:
    """Header row plus one row per record, RFC-style quoting."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL)
    if command == "constants":
        header = list(ConstantsRow.model_fields)
        writer.writerow(header)
        for row in payload["rows"]:
            writer.writerow([_scalar(row[k]) for k in header])
    elif command in ("bound", "landau"):
        header = list(payload)
        writer.writerow(header)
        writer.writerow([_scalar(payload[k]) for k in header])
    elif command == "verify":
        header = ["name", "checks", "failures", "worst", "tol", "passed", "notes"]
        writer.writerow(header)
        for s in payload["suites"]:
            writer.writerow([_scalar(s[k]) for k in header[:-1]]
                            + ["; ".join(s["notes"])])
    elif command == "table":
        writer.writerow(payload["columns"])
        for row in payload["rows"]:
            writer.writerow([_scalar(v) for v in row])
    else:
        raise ValueError(f"no CSV layout for {command!r}")
    return buf.getvalue()


def _emit(args, command: str, payload: dict) -> None:
    if args.format == "json":
        text = render_json(payload) + "\n"
    else:
        text = render_csv(command, payload)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -------------------------------------------------------------- dispatch


def _floats(s: str) -> list[float]:
    return [float(v) for v in s.split(",")]


def _ints(s: str) -> list[int]:
    return [int(v) for v in s.split(",")]


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for '{args.command}'")


def _invoke(args, path: str, req, handler) -> dict:
    if args.server:
        url = args.server.rstrip("/") + path
        resp = httpx.post(url, json=req.model_dump(mode="json"), timeout=600.0)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise UsageError(f"server rejected request: {detail}")
        return resp.json()
    return handler(req).model_dump()


def _cmd_constants(args) -> int:
    _require(args, "n", "alpha", "q")
    req = ConstantsRequest(n=_ints(args.n), alpha=_floats(args.alpha),
                           q=args.q.split(","), x=_floats(args.x or "0"),
                           brute=args.brute, degree=args.degree)
    payload = _invoke(args, "/constants", req, compute_constants)
    _emit(args, "constants", payload)
    if args.tol is not None and args.brute:
        worst = max((row["rel_gap"] or 0.0) for row in payload["rows"])
        if worst > args.tol:
            print(f"closed-form vs brute-force gap {worst:.3e} exceeds "
                  f"tol {args.tol:.3e}", file=sys.stderr)
            return 1
    return 0


def _cmd_bound(args) -> int:
    _require(args, "n", "alpha")
    req = BoundRequest(
        n=int(args.n), alpha=float(args.alpha), p=args.p, q=args.q,
        x=_floats(args.x or "0"), dir=_floats(args.dir) if args.dir else None,
        phi=args.phi, rule=args.rule, degree=args.degree,
        samples=args.samples, seed=args.seed)
    payload = _invoke(args, "/bound", req, compute_bound)
    _emit(args, "bound", payload)
    if args.tol is not None and payload.get("ratio") is not None:
        if payload["ratio"] > 1.0 + args.tol:
            print(f"measured gradient exceeds the certified bound: "
                  f"ratio {payload['ratio']:.6g}", file=sys.stderr)
            return 1
    return 0


def _cmd_landau(args) -> int:
    _require(args, "n", "alpha", "M")
    M = _floats(args.M)
    if len(M) != 1:
        raise UsageError("landau takes a single --M; use 'table landau' for sweeps")
    req = LandauRequest(n=int(args.n), alpha=float(args.alpha), M=M[0])
    payload = _invoke(args, "/landau", req, compute_landau)
    _emit(args, "landau", payload)
    return 0


def _cmd_verify(args) -> int:
    req = VerifyRequest(seed=args.seed)
    payload = _invoke(args, "/verify", req, run_verify)
    _emit(args, "verify", payload)
    return int(payload["exit_code"])


def _cmd_table(args) -> int:
    _require(args, "n", "alpha")
    req = TableRequest(
        kind=args.kind, n=int(args.n), alpha=float(args.alpha), q=args.q,
        M=_floats(args.M) if args.M else None,
        x_max=float(args.x) if args.kind == "bound" and args.x else 0.9,
        rows=args.rows)
    payload = _invoke(args, "/table", req, compute_table)
    _emit(args, "table", payload)
    return 0


_DISPATCH = {
    "constants": _cmd_constants,
    "bound": _cmd_bound,
    "landau": _cmd_landau,
    "verify": _cmd_verify,
    "table": _cmd_table,
}


# ---------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", help="base URL of a running service; "
                        "default is in-process execution")
    common.add_argument("--n", help="dimension(s), comma-separated for constants")
    common.add_argument("--alpha", help="parameter(s) alpha < 1")
    common.add_argument("--p", help="Hoelder exponent p (or 'inf')")
    common.add_argument("--q", help="conjugate exponent q: decimal, 'a/b', or 'inf'")
    common.add_argument("--M", help="sup-norm budget(s) for the Landau solver")
    common.add_argument("--x",
                        help="point: radius along e1, or full coordinates "
                        "(default origin; for 'table bound' the sweep end, "
                        "default 0.9)")
    common.add_argument("--dir", help="unit direction coordinates")
    common.add_argument("--phi", help="boundary data spec, e.g. coordinate:0, "
                        "signed:0,0,1, cap:0.5:1,0,0, linear:2, csv:path")
    common.add_argument("--rule", default="auto",
                        help="quadrature: auto|zonal|bizonal|monte-carlo")
    common.add_argument("--degree", type=int, default=256)
    common.add_argument("--samples", type=int, default=200_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float,
                        help="gate: constants --brute gap, or bound ratio slack")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="szego",
        description="sharp gradient-bound constants, alpha-harmonic "
                    "extensions, and Landau univalence radii on the unit ball")
    sub = parser.add_subparsers(dest="command", required=True)
    pc = sub.add_parser("constants", parents=[common],
                        help="regime-classified constants per (n, alpha, q, |x|)")
    pc.add_argument("--brute", action="store_true",
                    help="add the swept brute-force column and relative gap")
    sub.add_parser("bound", parents=[common],
                   help="gradient-bound coefficient at a point, optionally "
                        "checked against boundary data")
    sub.add_parser("landau", parents=[common],
                   help="univalence radius r0 and covered radius R0")
    sub.add_parser("verify", parents=[common],
                   help="run every module's invariant battery")
    pt = sub.add_parser("table", parents=[common],
                        help="plottable sweep tables")
    pt.add_argument("kind", choices=("bound", "landau"))
    pt.add_argument("--rows", type=int, default=19)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: cannot reach server: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
