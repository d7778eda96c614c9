"""Machine-readable report envelope shared by the service and the CLI.

Reports are deterministic: keys are sorted, rationals appear as
{"num", "den"} objects, and floats occur only inside Monte Carlo
estimates.  See docs/schemas.md for the full schema.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .lang import print_val
from .montecarlo import Estimate, RNG_SPEC
from .semantics import BoundResult, ExecResult

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "rat_json", "exec_result_json",
           "bound_result_json", "estimate_json", "make_report",
           "render_report"]


def rat_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def exec_result_json(r: ExecResult) -> dict:
    entries = sorted(((print_val(v), w) for v, w in r.values.items()),
                     key=lambda kv: kv[0])
    return {
        "depth": r.depth,
        "values": [{"key": k, "num": w.numerator, "den": w.denominator}
                   for k, w in entries],
        "value_mass": rat_json(r.values.mass()),
        "stuck_mass": rat_json(r.stuck_mass),
        "residual_mass": rat_json(r.residual_mass),
    }


def bound_result_json(b: BoundResult) -> dict:
    return {
        "mode": b.mode,
        "depth": b.depth,
        "lower": rat_json(b.lower),
        "upper": rat_json(b.upper),
        "width": rat_json(b.width()),
    }


def estimate_json(e: Estimate) -> dict:
    return {
        "trials": e.trials,
        "successes": e.successes,
        "freq": e.freq,
        "tolerance": e.tolerance,
        "confidence": e.confidence,
        "exhausted": e.exhausted,
    }


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return rat_json(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    return x


def make_report(command: str, inputs: dict, result: Any,
                verdict: str = "pass", sampled: bool = False) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "erislab", "version": __version__},
        "command": command,
        "inputs": _jsonable(inputs),
        "verdict": verdict,
        "result": _jsonable(result),
        "rng": dict(RNG_SPEC) if sampled else None,
    }


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
