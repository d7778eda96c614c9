"""Single-step distribution, tape state-steps, and stratified execution
with explicit stuck/residual accounting.

``step_shape`` factors the one-step relation into a small sum type so the
exact engine (this module), the trace checker, and the Monte Carlo
sampler all share a single redex-decomposition.

The exact engine reports three masses at depth n: value mass, stuck mass,
and residual (out-of-depth) mass.  The reference semantics folds stuck
and residual into a single missing mass; the split here is an extension
needed to report error brackets (stuck mass is charged in both partial
and total mode, residual only in total mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal, Optional, Union

from .distr import Distr, ONE, ZERO, dret
from .lang import (
    AllocN, AllocTape, App, BinOp, BoolLit, Config, Expr, Fst, If, IntLit,
    Inl, Inr, LblLit, Load, LocLit, Match, Pair, Rand, RandLbl, Rec, Snd,
    State, Store, UnitLit, Val, Var, VBool, VClosure, VInl, VInr, VInt,
    VLbl, VLoc, VPair, VUnit, as_value, subst, to_expr,
)

__all__ = [
    "ShapeValue", "ShapeStuck", "ShapeDet", "ShapeRand", "StepShape",
    "step_shape", "step", "state_step", "ExecResult", "exec_n",
    "BoundResult", "exec_bracket", "FrontierLimitExceeded",
    "DEFAULT_FRONTIER_LIMIT", "apply_binop", "presample",
]

DEFAULT_FRONTIER_LIMIT = 10**6


@dataclass(frozen=True)
class ShapeValue:
    value: Val


@dataclass(frozen=True)
class ShapeStuck:
    pass


@dataclass(frozen=True)
class ShapeDet:
    succ: Config
    redex: Expr  # the contracted subexpression, for checker inspection


@dataclass(frozen=True)
class ShapeRand:
    bound: int
    site: Optional[int]
    build: Callable[[int], Config]


StepShape = Union[ShapeValue, ShapeStuck, ShapeDet, ShapeRand]

_STUCK = ShapeStuck()


def apply_binop(op: str, left: Val, right: Val) -> Optional[Val]:
    """Total where defined; None means the operation is stuck."""
    if op == "+" and isinstance(left, VLoc) and isinstance(right, VInt):
        # offsetting a location: l[b] is written (+ l b)
        return VLoc(left.index + right.value)
    if op in ("+", "-", "*", "<", "<="):
        if not (isinstance(left, VInt) and isinstance(right, VInt)):
            return None
        a, b = left.value, right.value
        if op == "+":
            return VInt(a + b)
        if op == "-":
            return VInt(a - b)
        if op == "*":
            return VInt(a * b)
        if op == "<":
            return VBool(a < b)
        return VBool(a <= b)
    if op in ("&&", "||"):
        if not (isinstance(left, VBool) and isinstance(right, VBool)):
            return None
        if op == "&&":
            return VBool(left.value and right.value)
        return VBool(left.value or right.value)
    if op == "=":
        return _structural_eq(left, right)
    raise ValueError(f"unknown operator {op!r}")


def _structural_eq(a: Val, b: Val) -> Optional[VBool]:
    # Comparing closures is undefined behaviour (stuck); everything else
    # compares structurally, with shape mismatches evaluating to false.
    if isinstance(a, VClosure) or isinstance(b, VClosure):
        return None
    if isinstance(a, VPair) and isinstance(b, VPair):
        l = _structural_eq(a.fst, b.fst)
        if l is None:
            return None
        r = _structural_eq(a.snd, b.snd)
        if r is None:
            return None
        return VBool(l.value and r.value)
    if isinstance(a, VInl) and isinstance(b, VInl):
        return _structural_eq(a.value, b.value)
    if isinstance(a, VInr) and isinstance(b, VInr):
        return _structural_eq(a.value, b.value)
    if isinstance(a, (VPair, VInl, VInr)) or isinstance(b, (VPair, VInl, VInr)):
        return VBool(False)
    return VBool(a == b)


def step_shape(cfg: Config) -> StepShape:
    v = as_value(cfg.expr)
    if v is not None:
        return ShapeValue(v)
    return _shape(cfg.expr, cfg.state)


def _wrap(shape: StepShape, rebuild: Callable[[Expr], Expr]) -> StepShape:
    if isinstance(shape, ShapeDet):
        succ = Config(rebuild(shape.succ.expr), shape.succ.state)
        return ShapeDet(succ, shape.redex)
    if isinstance(shape, ShapeRand):
        inner = shape.build
        return ShapeRand(shape.bound, shape.site,
                         lambda i: Config(rebuild(inner(i).expr), inner(i).state))
    return shape  # stuck propagates


def _shape(e: Expr, sigma: State) -> StepShape:
    # Callers guarantee e is not a value.
    if isinstance(e, Var):
        return _STUCK

    if isinstance(e, App):
        if as_value(e.argument) is None:
            return _wrap(_shape(e.argument, sigma), lambda x: App(e.fn, x))
        fv = as_value(e.fn)
        if fv is None:
            return _wrap(_shape(e.fn, sigma), lambda x: App(x, e.argument))
        if isinstance(fv, VClosure):
            av = as_value(e.argument)
            body = subst(fv.body, fv.arg, av)
            body = subst(body, fv.fname, fv)
            return ShapeDet(Config(body, sigma), e)
        return _STUCK

    if isinstance(e, BinOp):
        if as_value(e.right) is None:
            return _wrap(_shape(e.right, sigma), lambda x: BinOp(e.op, e.left, x))
        if as_value(e.left) is None:
            return _wrap(_shape(e.left, sigma), lambda x: BinOp(e.op, x, e.right))
        res = apply_binop(e.op, as_value(e.left), as_value(e.right))
        if res is None:
            return _STUCK
        return ShapeDet(Config(to_expr(res), sigma), e)

    if isinstance(e, If):
        gv = as_value(e.guard)
        if gv is None:
            return _wrap(_shape(e.guard, sigma), lambda x: If(x, e.then, e.other))
        if isinstance(gv, VBool):
            return ShapeDet(Config(e.then if gv.value else e.other, sigma), e)
        return _STUCK

    if isinstance(e, Pair):
        if as_value(e.snd) is None:
            return _wrap(_shape(e.snd, sigma), lambda x: Pair(e.fst, x))
        # fst cannot be a value too, or e itself would be one
        return _wrap(_shape(e.fst, sigma), lambda x: Pair(x, e.snd))

    if isinstance(e, Fst):
        av = as_value(e.arg)
        if av is None:
            return _wrap(_shape(e.arg, sigma), lambda x: Fst(x))
        if isinstance(av, VPair):
            return ShapeDet(Config(to_expr(av.fst), sigma), e)
        return _STUCK

    if isinstance(e, Snd):
        av = as_value(e.arg)
        if av is None:
            return _wrap(_shape(e.arg, sigma), lambda x: Snd(x))
        if isinstance(av, VPair):
            return ShapeDet(Config(to_expr(av.snd), sigma), e)
        return _STUCK

    if isinstance(e, Inl):
        return _wrap(_shape(e.arg, sigma), lambda x: Inl(x))

    if isinstance(e, Inr):
        return _wrap(_shape(e.arg, sigma), lambda x: Inr(x))

    if isinstance(e, Match):
        sv = as_value(e.scrutinee)
        if sv is None:
            return _wrap(_shape(e.scrutinee, sigma),
                         lambda x: Match(x, e.lname, e.lbody, e.rname, e.rbody))
        if isinstance(sv, VInl):
            return ShapeDet(Config(subst(e.lbody, e.lname, sv.value), sigma), e)
        if isinstance(sv, VInr):
            return ShapeDet(Config(subst(e.rbody, e.rname, sv.value), sigma), e)
        return _STUCK

    if isinstance(e, AllocN):
        if as_value(e.init) is None:
            return _wrap(_shape(e.init, sigma), lambda x: AllocN(e.length, x))
        lv = as_value(e.length)
        if lv is None:
            return _wrap(_shape(e.length, sigma), lambda x: AllocN(x, e.init))
        if isinstance(lv, VInt) and lv.value >= 1:
            sigma2, base = sigma.alloc_block(lv.value, as_value(e.init))
            return ShapeDet(Config(LocLit(base), sigma2), e)
        return _STUCK

    if isinstance(e, Load):
        av = as_value(e.arg)
        if av is None:
            return _wrap(_shape(e.arg, sigma), lambda x: Load(x))
        if isinstance(av, VLoc):
            stored = sigma.heap_get(av.index)
            if stored is not None:
                return ShapeDet(Config(to_expr(stored), sigma), e)
        return _STUCK

    if isinstance(e, Store):
        if as_value(e.value) is None:
            return _wrap(_shape(e.value, sigma), lambda x: Store(e.dest, x))
        dv = as_value(e.dest)
        if dv is None:
            return _wrap(_shape(e.dest, sigma), lambda x: Store(x, e.value))
        if isinstance(dv, VLoc) and sigma.heap_get(dv.index) is not None:
            sigma2 = sigma.heap_set(dv.index, as_value(e.value))
            return ShapeDet(Config(UnitLit(), sigma2), e)
        return _STUCK

    if isinstance(e, Rand):
        bv = as_value(e.bound)
        if bv is None:
            return _wrap(_shape(e.bound, sigma),
                         lambda x, s=e.site: Rand(x, site=s))
        if isinstance(bv, VInt) and bv.value >= 0:
            return ShapeRand(bv.value, e.site,
                             lambda i, s=sigma: Config(IntLit(i), s))
        return _STUCK

    if isinstance(e, AllocTape):
        bv = as_value(e.bound)
        if bv is None:
            return _wrap(_shape(e.bound, sigma), lambda x: AllocTape(x))
        if isinstance(bv, VInt) and bv.value >= 0:
            sigma2, lbl = sigma.alloc_tape(bv.value)
            return ShapeDet(Config(LblLit(lbl), sigma2), e)
        return _STUCK

    if isinstance(e, RandLbl):
        lv = as_value(e.label)
        if lv is None:
            return _wrap(_shape(e.label, sigma),
                         lambda x, s=e.site: RandLbl(e.bound, x, site=s))
        bv = as_value(e.bound)
        if bv is None:
            return _wrap(_shape(e.bound, sigma),
                         lambda x, s=e.site: RandLbl(x, e.label, site=s))
        if not (isinstance(bv, VInt) and bv.value >= 0 and isinstance(lv, VLbl)):
            return _STUCK
        tape = sigma.tape_get(lv.index)
        if tape is not None and tape.bound == bv.value and tape.queue:
            head, rest = tape.queue[0], tape.queue[1:]
            sigma2 = sigma.tape_set(lv.index, type(tape)(tape.bound, rest))
            return ShapeDet(Config(IntLit(head), sigma2), e)
        # mismatched bound, empty queue, or unallocated label: plain rand
        return ShapeRand(bv.value, e.site,
                         lambda i, s=sigma: Config(IntLit(i), s))

    raise TypeError(f"unknown expression node {e!r}")


def step(cfg: Config) -> Distr[Config]:
    """One-step distribution; zero for values and stuck configurations."""
    shape = step_shape(cfg)
    if isinstance(shape, (ShapeValue, ShapeStuck)):
        return Distr()
    if isinstance(shape, ShapeDet):
        return dret(shape.succ)
    w = Fraction(1, shape.bound + 1)
    acc: dict[Config, Fraction] = {}
    for i in range(shape.bound + 1):
        c = shape.build(i)
        acc[c] = acc.get(c, ZERO) + w
    return Distr(acc)


def state_step(lbl: int, sigma: State) -> Distr[State]:
    """Append one uniformly sampled value to tape lbl (a ghost step)."""
    tape = sigma.tape_get(lbl)
    if tape is None:
        raise ValueError(f"state_step: label {lbl} not allocated")
    w = Fraction(1, tape.bound + 1)
    out: dict[State, Fraction] = {}
    for n in range(tape.bound + 1):
        s2 = sigma.tape_set(lbl, type(tape)(tape.bound, tape.queue + (n,)))
        out[s2] = w
    return Distr(out)


def presample(sigma: State, lbl: int, values: tuple[int, ...]) -> State:
    """Deterministically queue chosen values onto an allocated tape."""
    tape = sigma.tape_get(lbl)
    if tape is None:
        raise ValueError(f"presample: label {lbl} not allocated")
    return sigma.tape_set(lbl, type(tape)(tape.bound, tape.queue + tuple(values)))


class FrontierLimitExceeded(RuntimeError):
    def __init__(self, depth: int, size: int, limit: int):
        super().__init__(
            f"frontier of {size} configurations exceeds limit {limit} at depth {depth}")
        self.depth = depth


@dataclass(frozen=True)
class ExecResult:
    """Value distribution at depth n plus the two kinds of missing mass."""

    values: Distr[Val]
    stuck_mass: Fraction
    residual_mass: Fraction
    depth: int

    def total_mass(self) -> Fraction:
        return self.values.mass() + self.stuck_mass + self.residual_mass


def exec_n(cfg: Config, n: int,
           frontier_limit: int = DEFAULT_FRONTIER_LIMIT) -> ExecResult:
    """Stratified execution by breadth-first frontier propagation.

    Values are absorbed as soon as they appear (at any depth including
    n); stuck configurations are counted once a step would be required;
    whatever is still unresolved after n steps is residual mass.
    """
    if n < 0:
        raise ValueError("depth must be a natural")
    frontier: dict[Config, Fraction] = {cfg: ONE}
    values: dict[Val, Fraction] = {}
    stuck = ZERO
    residual = ZERO
    for depth in range(n + 1):
        if len(frontier) > frontier_limit:
            raise FrontierLimitExceeded(depth, len(frontier), frontier_limit)
        nxt: dict[Config, Fraction] = {}
        last = depth == n
        for c, w in frontier.items():
            shape = step_shape(c)
            if isinstance(shape, ShapeValue):
                values[shape.value] = values.get(shape.value, ZERO) + w
            elif last:
                residual += w
            elif isinstance(shape, ShapeStuck):
                stuck += w
            elif isinstance(shape, ShapeDet):
                nxt[shape.succ] = nxt.get(shape.succ, ZERO) + w
            else:
                ww = w * Fraction(1, shape.bound + 1)
                for i in range(shape.bound + 1):
                    succ = shape.build(i)
                    nxt[succ] = nxt.get(succ, ZERO) + ww
        frontier = nxt
    result = ExecResult(Distr(values), stuck, residual, n)
    assert result.total_mass() == ONE
    return result


@dataclass(frozen=True)
class BoundResult:
    """Exact bracket on the limit error of a program against a postcondition."""

    lower: Fraction
    upper: Fraction
    depth: int
    mode: str

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper <= 1):
            raise ValueError(f"bad bracket [{self.lower}, {self.upper}]")

    def width(self) -> Fraction:
        return self.upper - self.lower


Mode = Literal["partial", "total"]


def exec_bracket(cfg: Config, post: Callable[[Val], bool], mode: Mode, n: int,
                 frontier_limit: int = DEFAULT_FRONTIER_LIMIT) -> BoundResult:
    """Bracket the partial or total error of cfg against post at depth n.

    Both modes share the lower endpoint (observed-bad plus stuck mass).
    Partial mode's upper endpoint adds the residual, total mode's is one
    minus the observed-good mass; the two coincide at finite depth, and
    the bracket width is exactly the residual mass.
    """
    if mode not in ("partial", "total"):
        raise ValueError(f"mode must be 'partial' or 'total', got {mode!r}")
    r = exec_n(cfg, n, frontier_limit)
    bad = r.values.pr(lambda v: not post(v))
    lower = bad + r.stuck_mass
    if mode == "partial":
        upper = lower + r.residual_mass
    else:
        upper = ONE - r.values.pr(post)
    return BoundResult(lower, upper, n, mode)
