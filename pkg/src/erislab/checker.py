"""Error-bound claim validation.

Four layers, strongest first:

* ``exact_bound`` brackets the true error by exhaustive enumeration and
  is the oracle every other check is judged against;
* ``validate_schedule`` replays an expected-credit schedule over every
  trace of a recursion-free program, spending each table's mean at its
  sampling site and crediting the per-outcome entry on each branch;
* ``validate_amplification`` certifies one iteration of a tail-recursive
  retry loop: every trace must either end in an accepted sample or
  amplify its entry credit by the certificate's factor;
* closed-form calculators (``tail_bound``, ``spline_bound``) whose
  formulas the test suite gates against the exact oracle.

Trace exploration never runs recursive calls: the canonical divergence
idiom ``((rec f x (f x)) v)`` is recognized and treated as acceptable in
partial mode (a diverging trace satisfies anything) and as a failure in
total mode; any other reachable self-application is rejected outright,
as is any trace that outlives the step budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .credits import Credit, Err2Table, amp_depth, check_contradiction, rand_exp_mean
from .lang import (App, Config, Expr, Rand, RandLbl, Rec, State, Val, Var,
                   free_vars, print_expr, print_val)
from .predicates import Pred, evaluate, pred_from_json, pred_to_json
from .semantics import (BoundResult, ShapeDet, ShapeRand, ShapeStuck,
                        ShapeValue, exec_bracket, step_shape)

__all__ = [
    "CreditSchedule", "AmpCertificate", "Verdict", "BoundResult",
    "exact_bound", "validate_schedule", "validate_amplification",
    "tail_bound", "spline_bound", "ast_evidence",
    "schedule_from_json", "schedule_to_json",
    "certificate_from_json", "certificate_to_json",
    "DEFAULT_TRACE_BUDGET",
]

DEFAULT_TRACE_BUDGET = 10_000

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class CreditSchedule:
    """Initial credit plus one Err2 table per sampling site id."""

    initial: Fraction
    site_tables: tuple[tuple[int, Err2Table], ...]

    @staticmethod
    def make(initial: Fraction, tables: Mapping[int, Err2Table]) -> "CreditSchedule":
        initial = Fraction(initial)
        if initial < 0:
            raise ValueError("initial credit must be nonnegative")
        return CreditSchedule(initial, tuple(sorted(tables.items())))

    def table_for(self, site: int) -> Optional[Err2Table]:
        for s, t in self.site_tables:
            if s == site:
                return t
        return None


@dataclass(frozen=True)
class AmpCertificate:
    """Amplification certificate for one retry-loop iteration."""

    k: Fraction
    body_schedule: CreditSchedule
    success_post: Pred


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: Optional[str] = None
    trace: tuple[str, ...] = ()
    certified_depth: Optional[int] = None

    def to_json(self) -> dict:
        out: dict = {"accepted": self.accepted}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.trace:
            out["trace"] = list(self.trace)
        if self.certified_depth is not None:
            out["certified_depth"] = self.certified_depth
        return out


def exact_bound(e: Expr, post: Pred | Callable[[Val], bool], mode: str,
                depth: int) -> BoundResult:
    """Exact error bracket from enumeration; the ground truth."""
    fn = post if callable(post) else (lambda v: evaluate(post, v))
    return exec_bracket(Config(e, State()), fn, mode, depth)


def _is_omega_redex(redex: Expr) -> bool:
    # ((rec f x (f x)) v): the corpus spelling of divergence
    if not isinstance(redex, App):
        return False
    fn = redex.fn
    if not isinstance(fn, Rec):
        return False
    b = fn.body
    return (isinstance(b, App) and isinstance(b.fn, Var) and b.fn.name == fn.fname
            and isinstance(b.argument, Var) and b.argument.name == fn.arg)


def _is_recursive_redex(redex: Expr) -> bool:
    if not isinstance(redex, App):
        return False
    fn = redex.fn
    return isinstance(fn, Rec) and fn.fname in free_vars(fn.body)


@dataclass
class _Trace:
    cfg: Config
    credit: Fraction
    fired: frozenset[int]
    events: tuple[str, ...]
    fuel: int


def _reject(t: _Trace, reason: str) -> Verdict:
    return Verdict(False, reason, t.events)


def validate_schedule(e: Expr, schedule: CreditSchedule,
                      post: Pred | Callable[[Val], bool], mode: str,
                      trace_budget: int = DEFAULT_TRACE_BUDGET,
                      state: Optional[State] = None) -> Verdict:
    """Check a credit schedule against every trace of a recursion-free
    program.

    A trace is discharged when its ledger reaches one full credit or it
    ends in a value satisfying the postcondition; sites may fire at most
    once per trace, fire only with at least their table's mean available,
    and spend exactly that mean.  Sites without a table behave as
    all-zero tables.

    An initial state with pre-populated tapes may be supplied: labelled
    sampling then consumes the queues deterministically and costs no
    credit, which realizes presampling ghost steps concretely.
    """
    if mode not in ("partial", "total"):
        raise ValueError(f"mode must be 'partial' or 'total', got {mode!r}")
    postfn = post if callable(post) else (lambda v: evaluate(post, v))

    stack = [_Trace(Config(e, state if state is not None else State()),
                    schedule.initial, frozenset(), (), trace_budget)]
    while stack:
        t = stack.pop()
        if check_contradiction(Credit(t.credit)):
            continue  # discharged: the branch holds a full credit
        shape = step_shape(t.cfg)
        if isinstance(shape, ShapeValue):
            if postfn(shape.value):
                continue
            return _reject(t, f"trace ends in {print_val(shape.value)} violating "
                              f"the postcondition with credit {t.credit}")
        if isinstance(shape, ShapeStuck):
            return _reject(t, f"trace gets stuck at {print_expr(t.cfg.expr)} "
                              f"with credit {t.credit}")
        if t.fuel <= 0:
            return _reject(t, "trace exceeded the step budget; recursion suspected")
        if isinstance(shape, ShapeDet):
            if _is_omega_redex(shape.redex):
                if mode == "partial":
                    continue  # diverging traces are acceptable in partial mode
                return _reject(t, f"trace diverges with credit {t.credit} "
                                  "(total mode charges divergence)")
            if _is_recursive_redex(shape.redex):
                return _reject(t, "recursion detected: "
                                  f"{print_expr(shape.redex.fn)} applied to itself")
            stack.append(_Trace(shape.succ, t.credit, t.fired, t.events, t.fuel - 1))
            continue
        # a sampling site fires
        site = shape.site
        table = schedule.table_for(site) if site is not None else None
        if table is None:
            table = Err2Table.make(shape.bound, {})
        if table.bound != shape.bound:
            return _reject(t, f"site {site}: table bound {table.bound} does not "
                              f"match the sample bound {shape.bound}")
        if site in t.fired:
            return _reject(t, f"site {site} fires twice on one trace")
        mean = rand_exp_mean(table)
        if t.credit < mean:
            return _reject(t, f"insufficient credit at site {site}: "
                              f"{t.credit} < {mean}")
        fired = t.fired | ({site} if site is not None else set())
        for i in range(shape.bound + 1):
            credit2 = t.credit - mean + table.get(i)
            ev = t.events + (f"site {site} -> {i} (credit {t.credit} -> {credit2})",)
            stack.append(_Trace(shape.build(i), credit2, fired, ev, t.fuel - 1))
    return Verdict(True)


def validate_amplification(sampler_body: Expr, cert: AmpCertificate,
                           eps0: Fraction,
                           trace_budget: int = DEFAULT_TRACE_BUDGET) -> Verdict:
    """Certify one retry-loop iteration by error amplification.

    The body runs once with the schedule's initial as a symbolic unit of
    entry credit; each trace must end in a value accepted by the success
    postcondition, or end holding at least k times the entry credit.
    Acceptance certifies that the loop truncated at amp_depth(eps0, k)
    retries has total error at most eps0.
    """
    eps0 = Fraction(eps0)
    if cert.k <= 1:
        raise ValueError("amplification factor k must exceed 1")
    if eps0 <= 0:
        raise ValueError("starting credit must be positive")
    entry = cert.body_schedule.initial
    if entry <= 0:
        raise ValueError("body schedule must carry a positive entry credit")
    target = cert.k * entry

    stack = [_Trace(Config(sampler_body, State()), entry, frozenset(), (),
                    trace_budget)]
    while stack:
        t = stack.pop()
        shape = step_shape(t.cfg)
        if isinstance(shape, ShapeValue):
            if evaluate(cert.success_post, shape.value):
                continue
            if t.credit >= target:
                continue
            return _reject(t, f"retry trace ends in {print_val(shape.value)} with "
                              f"credit {t.credit} < k * entry = {target}")
        if isinstance(shape, ShapeStuck):
            return _reject(t, f"iteration gets stuck at {print_expr(t.cfg.expr)}")
        if t.fuel <= 0:
            return _reject(t, "iteration exceeded the step budget")
        if isinstance(shape, ShapeDet):
            if _is_omega_redex(shape.redex) or _is_recursive_redex(shape.redex):
                return _reject(t, "iteration body must not recurse")
            stack.append(_Trace(shape.succ, t.credit, t.fired, t.events, t.fuel - 1))
            continue
        site = shape.site
        table = cert.body_schedule.table_for(site) if site is not None else None
        if table is None:
            table = Err2Table.make(shape.bound, {})
        if table.bound != shape.bound:
            return _reject(t, f"site {site}: table bound {table.bound} does not "
                              f"match the sample bound {shape.bound}")
        if site in t.fired:
            return _reject(t, f"site {site} fires twice in one iteration")
        mean = rand_exp_mean(table)
        if t.credit < mean:
            return _reject(t, f"insufficient credit at site {site}: "
                              f"{t.credit} < {mean}")
        fired = t.fired | ({site} if site is not None else set())
        for i in range(shape.bound + 1):
            credit2 = t.credit - mean + table.get(i)
            ev = t.events + (f"site {site} -> {i} (credit {t.credit} -> {credit2})",)
            stack.append(_Trace(shape.build(i), credit2, fired, ev, t.fuel - 1))
    return Verdict(True, certified_depth=amp_depth(eps0, cert.k))


def tail_bound(m: int, n: int, tries: int) -> Fraction:
    """Probability that a bounded uniform rejection sampler (sample space
    {0..m}, accepted set {0..n}) exhausts all its tries."""
    if not (m > n >= 0):
        raise ValueError("need m > n >= 0")
    if tries < 0:
        raise ValueError("tries must be a natural")
    return Fraction(m - n, m + 1) ** tries


def spline_bound(n: int, k: int) -> Fraction:
    """Credit sufficient for the escaping-spline walk started at position
    n to stop within k+1 samples: n/(n+k+1)."""
    if n < 1:
        raise ValueError("spline position must be at least 1")
    if k < 0:
        raise ValueError("k must be a natural")
    return Fraction(n, n + k + 1)


def ast_evidence(e: Expr, post: Pred | Callable[[Val], bool],
                 depths: Sequence[int]) -> list[tuple[int, Fraction]]:
    """Total-mode upper bounds at increasing depths; their decay toward a
    limit is the numeric witness for almost-sure termination claims."""
    fn = post if callable(post) else (lambda v: evaluate(post, v))
    out = []
    for d in depths:
        out.append((d, exec_bracket(Config(e, State()), fn, "total", d).upper))
    return out


# ---------------------------------------------------------------------------
# JSON codecs

def _rat_from_json(d) -> Fraction:
    if isinstance(d, dict):
        return Fraction(int(d["num"]), int(d["den"]))
    if isinstance(d, str):
        return Fraction(d)
    if isinstance(d, int):
        return Fraction(d)
    raise ValueError(f"cannot read rational from {d!r}")


def _rat_to_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def _table_from_json(d: dict) -> Err2Table:
    entries = {int(i): _rat_from_json(v) for i, v in d.get("entries", {}).items()}
    return Err2Table.make(int(d["bound"]), entries)


def _table_to_json(t: Err2Table) -> dict:
    return {"bound": t.bound,
            "entries": {str(i): _rat_to_json(v) for i, v in t.entries}}


def schedule_from_json(d: dict) -> CreditSchedule:
    tables = {int(s): _table_from_json(t)
              for s, t in d.get("site_tables", {}).items()}
    return CreditSchedule.make(_rat_from_json(d["initial"]), tables)


def schedule_to_json(s: CreditSchedule) -> dict:
    return {"initial": _rat_to_json(s.initial),
            "site_tables": {str(k): _table_to_json(t) for k, t in s.site_tables}}


def certificate_from_json(d: dict) -> AmpCertificate:
    return AmpCertificate(_rat_from_json(d["k"]),
                          schedule_from_json(d["body_schedule"]),
                          pred_from_json(d["success_post"]))


def certificate_to_json(c: AmpCertificate) -> dict:
    return {"k": _rat_to_json(c.k),
            "body_schedule": schedule_to_json(c.body_schedule),
            "success_post": pred_to_json(c.success_post)}
