"""Command-line front door: a thin client of the FastAPI service.

By default, requests run against the service app mounted in-process (no
network, fully deterministic); pass --server URL to talk to a remote
instance instead.  Every command prints a JSON report to stdout and
exits 0 exactly when the report's verdict is "pass".
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from .reports import render_report

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _post(path: str, payload: dict, server: str | None) -> tuple[int, dict]:
    if server:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=None)
        return resp.status_code, resp.json()

    async def go():
        from .service import app
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://erislab") as client:
            resp = await client.post(path, json=payload, timeout=None)
            return resp.status_code, resp.json()

    return asyncio.run(go())


def _emit(status: int, body: dict) -> int:
    if status != 200:
        sys.stdout.write(render_report({"verdict": "error", "detail": body}))
        return EXIT_ERROR
    sys.stdout.write(render_report(body))
    return EXIT_PASS if body.get("verdict") == "pass" else EXIT_FAIL


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _read_json(path: str) -> dict:
    return json.loads(_read(path))


def _parse_params(pairs: list[str]) -> dict:
    out = {}
    for p in pairs:
        if "=" not in p:
            raise SystemExit(f"--param expects key=value, got {p!r}")
        k, v = p.split("=", 1)
        out[k] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eris",
        description="exact execution, error-bound checking, and case studies "
                    "for .eris programs")
    ap.add_argument("--server", help="URL of a running erislab service "
                                     "(default: run in-process)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="round-trip check a program file")
    p.add_argument("file")

    p = sub.add_parser("exec", help="exact execution to a given depth")
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--frontier-limit", type=int, default=None)

    p = sub.add_parser("bound", help="exact error bracket against a postcondition")
    p.add_argument("file")
    p.add_argument("--post", required=True, help="postcondition JSON file")
    p.add_argument("--mode", choices=("partial", "total"), required=True)
    p.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("mc", help="seeded Monte Carlo estimate")
    p.add_argument("file")
    p.add_argument("--post", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-budget", type=int, default=None)
    p.add_argument("--delta", type=float, default=1e-3)

    p = sub.add_parser("check-schedule", help="validate a credit schedule")
    p.add_argument("file")
    p.add_argument("schedule", help="schedule JSON file")
    p.add_argument("--post", required=True)
    p.add_argument("--mode", choices=("partial", "total"), required=True)

    p = sub.add_parser("check-amplification",
                       help="validate an amplification certificate")
    p.add_argument("file", help="one retry-loop iteration, as a program file")
    p.add_argument("certificate", help="certificate JSON file")
    p.add_argument("--eps0", required=True, help="starting credit, e.g. 1/8")

    p = sub.add_parser("evidence", help="total-mode upper bounds at a depth sweep")
    p.add_argument("file")
    p.add_argument("--post", required=True)
    p.add_argument("--depths", type=int, nargs="+", required=True)

    p = sub.add_parser("constants", help="closed-form constant tables")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--planner", nargs=2, type=int, metavar=("N", "L"))
    g.add_argument("--tail", nargs=3, type=int, metavar=("M", "N", "n"))
    g.add_argument("--spline", nargs=2, type=int, metavar=("n", "k"))
    g.add_argument("--amort-hash", nargs=2, type=int, metavar=("n", "MAX"))
    g.add_argument("--resize-hash", nargs=2, type=int, metavar=("V0", "R0"))

    p = sub.add_parser("case-study", help="run a case study against its claim")
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[],
                   help="key=value override, repeatable")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_PASS

    try:
        if args.command == "parse":
            payload = {"source": _read(args.file)}
            return _emit(*_post("/parse", payload, args.server))

        if args.command == "exec":
            payload = {"source": _read(args.file), "depth": args.depth}
            if args.frontier_limit is not None:
                payload["frontier_limit"] = args.frontier_limit
            return _emit(*_post("/exec", payload, args.server))

        if args.command == "bound":
            payload = {"source": _read(args.file),
                       "post": _read_json(args.post),
                       "mode": args.mode, "depth": args.depth}
            return _emit(*_post("/bound", payload, args.server))

        if args.command == "mc":
            payload = {"source": _read(args.file),
                       "post": _read_json(args.post),
                       "trials": args.trials, "seed": args.seed,
                       "delta": args.delta}
            if args.step_budget is not None:
                payload["step_budget"] = args.step_budget
            return _emit(*_post("/mc", payload, args.server))

        if args.command == "check-schedule":
            payload = {"source": _read(args.file),
                       "schedule": _read_json(args.schedule),
                       "post": _read_json(args.post), "mode": args.mode}
            return _emit(*_post("/check-schedule", payload, args.server))

        if args.command == "check-amplification":
            payload = {"source": _read(args.file),
                       "certificate": _read_json(args.certificate),
                       "eps0": args.eps0}
            return _emit(*_post("/check-amplification", payload, args.server))

        if args.command == "evidence":
            payload = {"source": _read(args.file),
                       "post": _read_json(args.post), "depths": args.depths}
            return _emit(*_post("/evidence", payload, args.server))

        if args.command == "constants":
            for kind in ("planner", "tail", "spline", "amort_hash", "resize_hash"):
                vals = getattr(args, kind)
                if vals is not None:
                    payload = {"kind": kind.replace("_", "-"), "args": vals}
                    return _emit(*_post("/constants", payload, args.server))

        if args.command == "case-study":
            payload = {"name": args.name, "seed": args.seed,
                       "params": _parse_params(args.param)}
            return _emit(*_post("/case-study", payload, args.server))
    except (FileNotFoundError, json.JSONDecodeError) as err:
        sys.stdout.write(render_report({"verdict": "error", "detail": str(err)}))
        return EXIT_ERROR

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
