"""Shared test helpers: seeded random program generation.

The generator builds closed, type-correct programs so properties about
execution masses are exercised on interesting traces; optional flags mix
in divergence (the canonical omega loop) and stuck leaves.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings

from erislab.lang import (App, BinOp, BoolLit, Expr, Fst, If, IntLit, Rand,
                          Rec, UnitLit, Var, assign_sites, parse_expr)

settings.register_profile("ci", derandomize=True, deadline=None)
settings.load_profile("ci")

OMEGA = parse_expr("((rec f x (f x)) 0)")
STUCK_LEAF = Fst(IntLit(0))


def gen_program(rng: random.Random, depth: int = 3, want: str = "bool",
                allow_omega: bool = False, allow_stuck: bool = False,
                int_vars: tuple[str, ...] = (),
                bool_vars: tuple[str, ...] = ()) -> Expr:
    """A closed, terminating (modulo omega leaves) program of the wanted
    type.  Every recursion-free output is schedule-checkable."""

    def leaf(kind: str) -> Expr:
        if kind == "int":
            if int_vars and rng.random() < 0.5:
                return Var(rng.choice(int_vars))
            return IntLit(rng.randint(0, 3))
        if bool_vars and rng.random() < 0.4:
            return Var(rng.choice(bool_vars))
        return BoolLit(rng.random() < 0.5)

    def go(d: int, kind: str, ivs: tuple[str, ...], bvs: tuple[str, ...]) -> Expr:
        if d == 0 or rng.random() < 0.25:
            return leaf(kind)
        if allow_omega and rng.random() < 0.08:
            return OMEGA
        if allow_stuck and rng.random() < 0.08:
            return STUCK_LEAF if kind == "int" else BinOp("=", STUCK_LEAF, IntLit(0))
        if kind == "int":
            c = rng.randrange(4)
            if c == 0:
                return Rand(IntLit(rng.randint(0, 3)))
            if c == 1:
                op = rng.choice(("+", "-", "*"))
                return BinOp(op, go(d - 1, "int", ivs, bvs), go(d - 1, "int", ivs, bvs))
            if c == 2:
                return If(go(d - 1, "bool", ivs, bvs),
                          go(d - 1, "int", ivs, bvs), go(d - 1, "int", ivs, bvs))
            x = f"x{d}{rng.randrange(100)}"
            return App(Rec("_", x, go(d - 1, "int", ivs + (x,), bvs)),
                       go(d - 1, "int", ivs, bvs))
        c = rng.randrange(4)
        if c == 0:
            op = rng.choice(("=", "<", "<="))
            return BinOp(op, go(d - 1, "int", ivs, bvs), go(d - 1, "int", ivs, bvs))
        if c == 1:
            op = rng.choice(("&&", "||"))
            return BinOp(op, go(d - 1, "bool", ivs, bvs), go(d - 1, "bool", ivs, bvs))
        if c == 2:
            return If(go(d - 1, "bool", ivs, bvs),
                      go(d - 1, "bool", ivs, bvs), go(d - 1, "bool", ivs, bvs))
        x = f"b{d}{rng.randrange(100)}"
        return App(Rec("_", x, go(d - 1, "bool", ivs, bvs + (x,))),
                   go(d - 1, "bool", ivs, bvs))

    return assign_sites(go(depth, want, int_vars, bool_vars))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xE515)


def rational_grid() -> list[Fraction]:
    return [Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2),
            Fraction(3, 4), Fraction(1)]
