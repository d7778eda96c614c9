"""Error-credit arithmetic and the closed-form constants used by the
checker: per-outcome credit tables, amplification depths, and the
expectation-preserving word-sampling constants.

Everything here is exact rational arithmetic; a ledger holding one full
credit or more is representable on purpose, since detecting that state
is how branches get discharged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .distr import expectation, uniform

__all__ = [
    "Credit", "Err2Table", "PlannerConstants",
    "split", "join", "weaken", "check_contradiction",
    "rand_exp_mean", "err_list_credit", "amp_depth",
    "planner_constants", "planner_D",
]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Credit:
    """A nonnegative amount of error credit; >= 1 certifies a contradiction."""

    amount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "amount", Fraction(self.amount))
        if self.amount < 0:
            raise ValueError("credit amount must be nonnegative")


def split(c: Credit, eps1: Fraction) -> tuple[Credit, Credit]:
    """Split a ledger into (eps1, rest); join is the exact inverse."""
    eps1 = Fraction(eps1)
    if eps1 < 0 or eps1 > c.amount:
        raise ValueError(f"cannot split {eps1} out of {c.amount}")
    return Credit(eps1), Credit(c.amount - eps1)


def join(a: Credit, b: Credit) -> Credit:
    return Credit(a.amount + b.amount)


def weaken(c: Credit, eps: Fraction) -> Credit:
    """Throw credit away; only lowering is sound."""
    eps = Fraction(eps)
    if eps < 0 or eps > c.amount:
        raise ValueError(f"cannot weaken {c.amount} to {eps}")
    return Credit(eps)


def check_contradiction(c: Credit) -> bool:
    """True once the ledger holds a full credit: the branch is discharged."""
    return c.amount >= 1


@dataclass(frozen=True)
class Err2Table:
    """Per-outcome credit table for one uniform sample over {0..bound}.

    Absent outcomes carry zero credit.
    """

    bound: int
    entries: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def make(bound: int, entries: Mapping[int, Fraction] | Sequence[Fraction]) -> "Err2Table":
        if bound < 0:
            raise ValueError("table bound must be a natural")
        if not isinstance(entries, Mapping):
            entries = {i: v for i, v in enumerate(entries)}
        norm: list[tuple[int, Fraction]] = []
        for i in sorted(entries):
            v = Fraction(entries[i])
            if i < 0 or i > bound:
                raise ValueError(f"outcome {i} outside 0..{bound}")
            if v < 0:
                raise ValueError(f"negative credit entry at outcome {i}")
            if v != 0:
                norm.append((i, v))
        return Err2Table(bound, tuple(norm))

    def get(self, outcome: int) -> Fraction:
        for i, v in self.entries:
            if i == outcome:
                return v
        return ZERO


def rand_exp_mean(t: Err2Table) -> Fraction:
    """Expected credit of the table under the uniform sample it annotates."""
    return sum((v for _, v in t.entries), ZERO) / (t.bound + 1)


def err_list_credit(xs: set[int] | frozenset[int], n: int) -> Fraction:
    """Credit needed to avoid the outcomes xs of a uniform {0..n} sample."""
    xs = frozenset(xs)
    bad = [x for x in xs if x < 0 or x > n]
    if bad:
        raise ValueError(f"avoided outcomes {sorted(bad)} outside 0..{n}")
    return Fraction(len(xs), n + 1)


def amp_depth(eps: Fraction, k: Fraction) -> int:
    """Smallest d with eps * k^d >= 1, by exact repeated multiplication."""
    eps = Fraction(eps)
    k = Fraction(k)
    if eps <= 0:
        raise ValueError("starting credit must be positive")
    if k <= 1:
        raise ValueError("amplification factor must exceed 1")
    d = 0
    cur = eps
    while cur < 1:
        cur *= k
        d += 1
    return d


@dataclass(frozen=True)
class PlannerConstants:
    """Exact factors for expectation-preserving sampling of a target word
    of length word_len over the alphabet {0..bound}."""

    bound: int
    word_len: int
    ec_amp: Fraction
    ec_rem: tuple[Fraction, ...]
    ec_exc: Fraction


def planner_constants(n: int, l: int) -> PlannerConstants:
    if l < 1:
        raise ValueError("word length must be at least 1")
    if n < 1:
        raise ValueError("alphabet bound must be at least 1")
    big = (n + 1) ** l - 1
    ec_amp = 1 + Fraction(1, big)
    ec_rem = tuple(1 - Fraction((n + 1) ** i - 1, big) for i in range(l + 1))
    return PlannerConstants(n, l, ec_amp, ec_rem, ec_amp - 1)


def planner_D(pc: PlannerConstants, eps: Fraction, i: int, c: int,
              w: Sequence[int]) -> Fraction:
    """Credit assigned to outcome c at word position i: the remaining-word
    factor on a hit, the amplification factor on a miss."""
    eps = Fraction(eps)
    if not (0 <= i < pc.word_len):
        raise IndexError(f"position {i} outside 0..{pc.word_len - 1}")
    if not (0 <= c <= pc.bound):
        raise IndexError(f"outcome {c} outside 0..{pc.bound}")
    if len(w) != pc.word_len:
        raise ValueError(f"word length {len(w)} != {pc.word_len}")
    if c == w[i]:
        return pc.ec_rem[i + 1] * eps
    return pc.ec_amp * eps


def _cross_check_mean(t: Err2Table) -> Fraction:
    # kept as an importable oracle hook: the distr module must agree
    return expectation(uniform(t.bound), t.get)
