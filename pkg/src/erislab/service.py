"""FastAPI service exposing the lab over HTTP.

Every endpoint accepts a JSON request model and returns the report
envelope described in docs/schemas.md.  The CLI is a thin client of this
service; by default it mounts the app in-process, so the two front doors
always agree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .casestudies import run_case_study
from .checker import (ast_evidence, certificate_from_json, exact_bound,
                      schedule_from_json, spline_bound, tail_bound,
                      validate_amplification, validate_schedule)
from .credits import planner_constants
from .casestudies import eps_max, resizing_amortized_credit
from .lang import Config, ParseError, State, parse_expr, print_expr, rand_sites
from .montecarlo import DEFAULT_STEP_BUDGET, estimate
from .predicates import pred_from_json
from .reports import (bound_result_json, estimate_json, exec_result_json,
                      make_report, rat_json)
from .semantics import DEFAULT_FRONTIER_LIMIT, FrontierLimitExceeded, exec_n

app = FastAPI(title="erislab", description=__doc__)


def _parse_or_422(source: str):
    try:
        return parse_expr(source)
    except ParseError as err:
        raise HTTPException(status_code=422, detail=f"parse error at {err}")


def _pred_or_422(post: dict):
    try:
        return pred_from_json(post)
    except (ValueError, KeyError, TypeError) as err:
        raise HTTPException(status_code=422, detail=f"bad postcondition: {err}")


class Report(BaseModel):
    """The envelope every endpoint returns; see docs/schemas.md."""

    schema_version: int
    tool: dict
    command: str
    inputs: dict
    verdict: str
    result: dict
    rng: Optional[dict] = None


class ParseRequest(BaseModel):
    source: str


class ExecRequest(BaseModel):
    source: str
    depth: int = Field(ge=0)
    frontier_limit: int = DEFAULT_FRONTIER_LIMIT


class BoundRequest(BaseModel):
    source: str
    post: dict
    mode: Literal["partial", "total"]
    depth: int = Field(ge=0)


class McRequest(BaseModel):
    source: str
    post: dict
    trials: int = Field(ge=1)
    seed: int = 0
    step_budget: int = DEFAULT_STEP_BUDGET
    delta: float = 1e-3


class ScheduleRequest(BaseModel):
    source: str
    schedule: dict
    post: dict
    mode: Literal["partial", "total"]


class AmplificationRequest(BaseModel):
    source: str
    certificate: dict
    eps0: dict | str


class ConstantsRequest(BaseModel):
    kind: Literal["planner", "tail", "spline", "amort-hash", "resize-hash"]
    args: list[int]


class CaseStudyRequest(BaseModel):
    name: str
    params: dict[str, Any] = {}
    seed: int = 0


class EvidenceRequest(BaseModel):
    source: str
    post: dict
    depths: list[int]


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/parse")
def parse(req: ParseRequest) -> Report:
    e = _parse_or_422(req.source)
    canonical = print_expr(e)
    roundtrip = parse_expr(canonical) == e
    result = {
        "canonical": canonical,
        "roundtrip": roundtrip,
        "sites": [{"site": s, "node": n} for s, n in rand_sites(e)],
    }
    return make_report("parse", {"source": req.source}, result,
                       verdict="pass" if roundtrip else "fail")


@app.post("/exec")
def exec_(req: ExecRequest) -> Report:
    e = _parse_or_422(req.source)
    try:
        r = exec_n(Config(e, State()), req.depth, req.frontier_limit)
    except FrontierLimitExceeded as err:
        raise HTTPException(status_code=422, detail=str(err))
    return make_report("exec", {"source": req.source, "depth": req.depth},
                       exec_result_json(r))


@app.post("/bound")
def bound(req: BoundRequest) -> Report:
    e = _parse_or_422(req.source)
    post = _pred_or_422(req.post)
    try:
        b = exact_bound(e, post, req.mode, req.depth)
    except FrontierLimitExceeded as err:
        raise HTTPException(status_code=422, detail=str(err))
    inputs = {"source": req.source, "post": req.post, "mode": req.mode,
              "depth": req.depth}
    return make_report("bound", inputs, bound_result_json(b))


@app.post("/mc")
def mc(req: McRequest) -> Report:
    e = _parse_or_422(req.source)
    post = _pred_or_422(req.post)
    est = estimate(e, lambda v: post(v), req.trials, req.seed,
                   req.step_budget, req.delta)
    inputs = {"source": req.source, "post": req.post, "trials": req.trials,
              "seed": req.seed, "step_budget": req.step_budget,
              "delta": req.delta}
    return make_report("mc", inputs, estimate_json(est), sampled=True)


@app.post("/check-schedule")
def check_schedule(req: ScheduleRequest) -> Report:
    e = _parse_or_422(req.source)
    post = _pred_or_422(req.post)
    try:
        sched = schedule_from_json(req.schedule)
    except (ValueError, KeyError, TypeError) as err:
        raise HTTPException(status_code=422, detail=f"bad schedule: {err}")
    v = validate_schedule(e, sched, post, req.mode)
    inputs = {"source": req.source, "schedule": req.schedule,
              "post": req.post, "mode": req.mode}
    return make_report("check-schedule", inputs, v.to_json(),
                       verdict="pass" if v.accepted else "fail")


@app.post("/check-amplification")
def check_amplification(req: AmplificationRequest) -> Report:
    e = _parse_or_422(req.source)
    try:
        cert = certificate_from_json(req.certificate)
        eps0 = (Fraction(int(req.eps0["num"]), int(req.eps0["den"]))
                if isinstance(req.eps0, dict) else Fraction(req.eps0))
        v = validate_amplification(e, cert, eps0)
    except (ValueError, KeyError, TypeError) as err:
        raise HTTPException(status_code=422, detail=f"bad certificate: {err}")
    inputs = {"source": req.source, "certificate": req.certificate,
              "eps0": str(eps0)}
    return make_report("check-amplification", inputs, v.to_json(),
                       verdict="pass" if v.accepted else "fail")


@app.post("/constants")
def constants(req: ConstantsRequest) -> Report:
    a = req.args
    try:
        if req.kind == "planner":
            n, l = a
            pc = planner_constants(n, l)
            result = {"bound": pc.bound, "word_len": pc.word_len,
                      "ec_amp": rat_json(pc.ec_amp),
                      "ec_rem": [rat_json(x) for x in pc.ec_rem],
                      "ec_exc": rat_json(pc.ec_exc)}
        elif req.kind == "tail":
            m, n, tries = a
            result = {"tail_bound": rat_json(tail_bound(m, n, tries))}
        elif req.kind == "spline":
            n, k = a
            result = {"spline_bound": rat_json(spline_bound(n, k))}
        elif req.kind == "amort-hash":
            n, maxq = a
            result = {"eps_max": rat_json(eps_max(n, maxq))}
        else:
            v0, r0 = a
            result = {"amortized": rat_json(resizing_amortized_credit(v0, r0))}
    except (ValueError, TypeError) as err:
        raise HTTPException(status_code=422, detail=str(err))
    return make_report("constants", {"kind": req.kind, "args": a}, result)


@app.post("/case-study")
def case_study(req: CaseStudyRequest) -> Report:
    try:
        out = run_case_study(req.name, req.params, req.seed)
    except (ValueError, KeyError, TypeError) as err:
        raise HTTPException(status_code=422, detail=str(err))
    inputs = {"name": req.name, "params": req.params, "seed": req.seed}
    return make_report("case-study", inputs, out,
                       verdict="pass" if out.get("pass") else "fail",
                       sampled=True)


@app.post("/evidence")
def evidence(req: EvidenceRequest) -> Report:
    e = _parse_or_422(req.source)
    post = _pred_or_422(req.post)
    try:
        rows = ast_evidence(e, post, req.depths)
    except (FrontierLimitExceeded, ValueError) as err:
        raise HTTPException(status_code=422, detail=str(err))
    result = {"uppers": [{"depth": d, "upper": rat_json(u)} for d, u in rows]}
    inputs = {"source": req.source, "post": req.post, "depths": req.depths}
    return make_report("evidence", inputs, result)
