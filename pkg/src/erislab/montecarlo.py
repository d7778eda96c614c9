"""Seeded single-trace execution and frequency estimation.

Randomness is a splitmix64 stream (constants below); uniform draws over
{0..N} use rejection on the top of the 64-bit range so there is no
modulo bias.  Trial i of an estimate runs on its own stream whose state
is the splitmix64 finalizer applied to seed + i; the finalizer is a
bijection on 64-bit words, so per-trial seeds never collide.

Tolerances are Hoeffding radii sqrt(ln(2/delta) / (2 * trials)):
conservative and assumption-free.  Floats appear only in the final
frequency/tolerance fields; all trace execution is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .lang import (AllocN, AllocTape, App, BinOp, Config, Expr, Fst, If,
                   IntLit, Inl, Inr, Load, Match, Pair, Rand, RandLbl, Rec,
                   Snd, State, Store, Val, Var, VBool, VClosure, VInl, VInr,
                   VInt, VLbl, VLoc, VPair, VUnit, as_value, subst)
from .semantics import apply_binop

__all__ = ["SplitMix64", "SPLITMIX64_GAMMA", "SPLITMIX64_MUL1",
           "SPLITMIX64_MUL2", "RNG_SPEC", "TrialKind", "TrialOutcome",
           "Estimate", "run_once", "estimate", "hoeffding_tolerance",
           "DEFAULT_STEP_BUDGET"]

DEFAULT_STEP_BUDGET = 10**5

SPLITMIX64_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX64_MUL1 = 0xBF58476D1CE4E5B9
SPLITMIX64_MUL2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

RNG_SPEC = {
    "algorithm": "splitmix64",
    "gamma": f"0x{SPLITMIX64_GAMMA:016X}",
    "mul1": f"0x{SPLITMIX64_MUL1:016X}",
    "mul2": f"0x{SPLITMIX64_MUL2:016X}",
    "uniform": "rejection on the top of the 64-bit range",
    "trial_seed": "stream state = finalize(seed + trial_index) mod 2^64",
}


def _finalize(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * SPLITMIX64_MUL1) & _MASK
    z = ((z ^ (z >> 27)) * SPLITMIX64_MUL2) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + SPLITMIX64_GAMMA) & _MASK
        return _finalize(self.state)

    def below(self, n: int) -> int:
        """Uniform over range(n); always consumes at least one draw."""
        if n <= 0:
            raise ValueError("below() needs a positive range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    @staticmethod
    def for_trial(seed: int, trial: int) -> "SplitMix64":
        return SplitMix64(_finalize(seed + trial))


class TrialKind(Enum):
    VALUE = "value"
    STUCK = "stuck"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class TrialOutcome:
    kind: TrialKind
    steps: int
    value: Optional[Val] = None


# Continuation frame tags for the single-trace machine.  One machine
# "contraction" corresponds to exactly one step of the step distribution,
# so step counts agree with exec_n depths; descending into subterms and
# rebuilding values are free administrative moves.
_APP_ARG, _APP_FN, _BIN_R, _BIN_L, _IF, _PAIR_R, _PAIR_L = range(7)
_FST, _SND, _INL, _INR, _MATCH, _ALLOC_INIT, _ALLOC_N = range(7, 14)
_LOAD, _STORE_VAL, _STORE_LOC, _RAND, _ALLOCTAPE, _RANDLBL_L, _RANDLBL_N = range(14, 21)


def run_once(e: Expr, seed: int, step_budget: int = DEFAULT_STEP_BUDGET,
             rng: Optional[SplitMix64] = None,
             state: Optional[State] = None) -> TrialOutcome:
    """Sample one execution path; deterministic given (e, seed, budget)."""
    r = rng if rng is not None else SplitMix64(_finalize(seed))
    sigma = state if state is not None else State()
    steps = 0
    stack: list[tuple] = []
    cur = e
    val: Optional[Val] = as_value(cur)

    def stuck() -> TrialOutcome:
        return TrialOutcome(TrialKind.STUCK, steps)

    def charge() -> bool:
        nonlocal steps
        if steps >= step_budget:
            return False
        steps += 1
        return True

    while True:
        if val is None:
            # evaluate cur
            t = cur
            if isinstance(t, Var):
                return stuck()
            if isinstance(t, App):
                stack.append((_APP_ARG, t.fn))
                cur = t.argument
            elif isinstance(t, BinOp):
                stack.append((_BIN_R, t.op, t.left))
                cur = t.right
            elif isinstance(t, If):
                stack.append((_IF, t.then, t.other))
                cur = t.guard
            elif isinstance(t, Pair):
                stack.append((_PAIR_R, t.fst))
                cur = t.snd
            elif isinstance(t, Fst):
                stack.append((_FST,))
                cur = t.arg
            elif isinstance(t, Snd):
                stack.append((_SND,))
                cur = t.arg
            elif isinstance(t, Inl):
                stack.append((_INL,))
                cur = t.arg
            elif isinstance(t, Inr):
                stack.append((_INR,))
                cur = t.arg
            elif isinstance(t, Match):
                stack.append((_MATCH, t.lname, t.lbody, t.rname, t.rbody))
                cur = t.scrutinee
            elif isinstance(t, AllocN):
                stack.append((_ALLOC_INIT, t.length))
                cur = t.init
            elif isinstance(t, Load):
                stack.append((_LOAD,))
                cur = t.arg
            elif isinstance(t, Store):
                stack.append((_STORE_VAL, t.dest))
                cur = t.value
            elif isinstance(t, Rand):
                stack.append((_RAND,))
                cur = t.bound
            elif isinstance(t, AllocTape):
                stack.append((_ALLOCTAPE,))
                cur = t.bound
            elif isinstance(t, RandLbl):
                stack.append((_RANDLBL_L, t.bound))
                cur = t.label
            else:
                raise TypeError(f"unknown expression node {t!r}")
            val = as_value(cur)
            continue

        # return val through the continuation
        if not stack:
            return TrialOutcome(TrialKind.VALUE, steps, val)
        frame = stack.pop()
        tag = frame[0]

        if tag == _APP_ARG:
            stack.append((_APP_FN, val))
            cur = frame[1]
            val = as_value(cur)
            continue
        if tag == _BIN_R:
            stack.append((_BIN_L, frame[1], val))
            cur = frame[2]
            val = as_value(cur)
            continue
        if tag == _PAIR_R:
            stack.append((_PAIR_L, val))
            cur = frame[1]
            val = as_value(cur)
            continue
        if tag == _PAIR_L:
            val = VPair(val, frame[1])
            continue
        if tag == _INL:
            val = VInl(val)
            continue
        if tag == _INR:
            val = VInr(val)
            continue
        if tag == _ALLOC_INIT:
            stack.append((_ALLOC_N, val))
            cur = frame[1]
            val = as_value(cur)
            continue
        if tag == _STORE_VAL:
            stack.append((_STORE_LOC, val))
            cur = frame[1]
            val = as_value(cur)
            continue
        if tag == _RANDLBL_L:
            stack.append((_RANDLBL_N, val))
            cur = frame[1]
            val = as_value(cur)
            continue

        # Every remaining frame performs one contraction.  Stuckness is
        # decided before any budget is spent: a stuck configuration takes
        # no step (its step distribution is zero), so the step counter
        # and the budget agree exactly with exec_n depths.
        if tag == _APP_FN:
            if not isinstance(val, VClosure):
                return stuck()
            b = val.body
            if (type(b) is App and type(b.fn) is Var and type(b.argument) is Var
                    and b.fn.name == val.fname and b.argument.name == val.arg
                    and val.fname != val.arg):
                # ((rec f x (f x)) v) reproduces its own configuration and
                # draws nothing, so it exhausts the budget with certainty
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, step_budget)
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            body = subst(b, val.arg, frame[1])
            cur = subst(body, val.fname, val)
            val = as_value(cur)
        elif tag == _BIN_L:
            res = apply_binop(frame[1], val, frame[2])
            if res is None:
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            val = res
        elif tag == _IF:
            if not isinstance(val, VBool):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            cur = frame[1] if val.value else frame[2]
            val = as_value(cur)
        elif tag == _FST:
            if not isinstance(val, VPair):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            val = val.fst
        elif tag == _SND:
            if not isinstance(val, VPair):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            val = val.snd
        elif tag == _MATCH:
            if isinstance(val, VInl):
                nxt = subst(frame[2], frame[1], val.value)
            elif isinstance(val, VInr):
                nxt = subst(frame[4], frame[3], val.value)
            else:
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            cur = nxt
            val = as_value(cur)
        elif tag == _ALLOC_N:
            if not (isinstance(val, VInt) and val.value >= 1):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            sigma, base = sigma.alloc_block(val.value, frame[1])
            val = VLoc(base)
        elif tag == _LOAD:
            if not isinstance(val, VLoc):
                return stuck()
            stored = sigma.heap_get(val.index)
            if stored is None:
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            val = stored
        elif tag == _STORE_LOC:
            if not (isinstance(val, VLoc) and sigma.heap_get(val.index) is not None):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            sigma = sigma.heap_set(val.index, frame[1])
            val = VUnit()
        elif tag == _RAND:
            if not (isinstance(val, VInt) and val.value >= 0):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            val = VInt(r.below(val.value + 1))
        elif tag == _ALLOCTAPE:
            if not (isinstance(val, VInt) and val.value >= 0):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            sigma, lbl = sigma.alloc_tape(val.value)
            val = VLbl(lbl)
        elif tag == _RANDLBL_N:
            lblv = frame[1]
            if not (isinstance(val, VInt) and val.value >= 0
                    and isinstance(lblv, VLbl)):
                return stuck()
            if not charge():
                return TrialOutcome(TrialKind.BUDGET_EXHAUSTED, steps)
            tape = sigma.tape_get(lblv.index)
            if tape is not None and tape.bound == val.value and tape.queue:
                head = tape.queue[0]
                sigma = sigma.tape_set(lblv.index,
                                       type(tape)(tape.bound, tape.queue[1:]))
                val = VInt(head)
            else:
                val = VInt(r.below(val.value + 1))
        else:
            raise AssertionError(f"bad frame tag {tag}")


def hoeffding_tolerance(trials: int, delta: float) -> float:
    return math.sqrt(math.log(2.0 / delta) / (2.0 * trials))


@dataclass(frozen=True)
class Estimate:
    trials: int
    successes: int
    freq: float
    tolerance: float
    confidence: float
    exhausted: int  # budget-exhausted trials, counted as failures


def estimate(e: Expr, post: Callable[[Val], bool], trials: int, seed: int,
             step_budget: int = DEFAULT_STEP_BUDGET,
             delta: float = 1e-3) -> Estimate:
    """Frequency of trials ending in a value satisfying post.

    Stuck and budget-exhausted trials count as failures; the exhausted
    count is reported separately.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    successes = 0
    exhausted = 0
    for i in range(trials):
        out = run_once(e, 0, step_budget, rng=SplitMix64.for_trial(seed, i))
        if out.kind is TrialKind.VALUE and post(out.value):
            successes += 1
        elif out.kind is TrialKind.BUDGET_EXHAUSTED:
            exhausted += 1
    return Estimate(trials, successes, successes / trials,
                    hoeffding_tolerance(trials, delta), 1.0 - delta, exhausted)
