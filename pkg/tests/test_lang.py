import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erislab.lang import (App, BinOp, BoolLit, Config, Expr, If, IntLit, Inl,
                          Inr, IsValue, LblLit, Load, LocLit, Match, Pair,
                          ParseError, Rand, Rec, Reducible, State, Stuck,
                          UnitLit, Var, VInt, as_value, assign_sites,
                          classify, free_vars, parse_expr, print_expr,
                          rand_sites, subst)

from conftest import gen_program


def test_rand_parses_to_constructor():
    assert parse_expr("(rand 3)") == Rand(IntLit(3))


def test_flip_desugars_to_rand_equality():
    assert parse_expr("(flip)") == BinOp("=", Rand(IntLit(1)), IntLit(1))


def test_let_desugars_to_applied_rec():
    assert parse_expr("(let x (rand 1) x)") == App(Rec("_", "x", Var("x")),
                                                   Rand(IntLit(1)))


def test_lam_seq_alloc_desugar():
    assert parse_expr("(lam x x)") == Rec("_", "x", Var("x"))
    seq = parse_expr("(seq 1 2)")
    assert seq == App(Rec("_", "_", IntLit(2)), IntLit(1))
    alloc = parse_expr("(alloc 7)")
    assert print_expr(alloc) == "(allocN 1 7)"


@pytest.mark.parametrize("src", ["(rand)", "(let x)", "(if true 1)",
                                 "(match 1 2 3)", "(", "(rand 1))", ""])
def test_parse_errors_are_positioned(src):
    with pytest.raises(ParseError):
        parse_expr(src)


def test_parse_error_carries_position():
    err = None
    try:
        parse_expr("(if true\n  (rand) 2)")
    except ParseError as e:
        err = e
    assert err is not None and err.line == 2


def test_print_examples():
    assert print_expr(IntLit(3)) == "3"
    assert print_expr(Rand(IntLit(3))) == "(rand 3)"
    assert print_expr(UnitLit()) == "unit"


def test_subst_examples():
    assert subst(Var("x"), "x", VInt(5)) == IntLit(5)
    rec = Rec("f", "x", Var("x"))
    assert subst(rec, "x", VInt(5)) == rec  # binder shadows
    e = BinOp("+", Var("x"), Var("y"))
    assert subst(e, "x", VInt(2)) == BinOp("+", IntLit(2), Var("y"))


def test_classify_examples():
    st0 = State()
    assert classify(Config(IntLit(42), st0)) == IsValue(VInt(42))
    assert isinstance(classify(Config(Rand(IntLit(3)), st0)), Reducible)
    assert isinstance(classify(Config(Load(LocLit(0)), st0)), Stuck)


def test_classify_is_a_partition(rng):
    st0 = State()
    kinds = set()
    for i in range(300):
        e = gen_program(rng, depth=3, want=rng.choice(("int", "bool")),
                        allow_omega=True, allow_stuck=True)
        c = classify(Config(e, st0))
        assert isinstance(c, (IsValue, Reducible, Stuck))
        kinds.add(type(c).__name__)
    assert "Reducible" in kinds


def test_argument_evaluates_before_function():
    # both halves are redexes; the argument must fire first
    e = App(If(BoolLit(True), Rec("_", "x", Var("x")), Rec("_", "x", Var("x"))),
            Rand(IntLit(1)))
    from erislab.semantics import ShapeRand, step_shape
    assert isinstance(step_shape(Config(e, State())), ShapeRand)


def test_sites_number_in_evaluation_order():
    e = parse_expr("(let n (rand 3) (+ n (rand 1)))")
    sites = rand_sites(e)
    assert sites == [(0, "(rand 3)"), (1, "(rand 1)")]


def test_desugared_forms_absent():
    src = "(let x (flip) (seq (lam y y) (if x 1 2)))"
    printed = print_expr(parse_expr(src))
    for sugar in ("flip", "let", "seq", "lam", "alloc "):
        assert sugar not in printed


# hypothesis AST generator for the round-trip property
_names = st.sampled_from(["x", "y", "f", "g", "acc", "n'"])


def _exprs():
    leaves = st.one_of(
        st.integers(-20, 20).map(IntLit),
        st.booleans().map(BoolLit),
        st.just(UnitLit()),
        st.integers(0, 3).map(LocLit),
        st.integers(0, 3).map(LblLit),
        _names.map(Var),
    )

    def extend(inner):
        return st.one_of(
            st.tuples(_names, _names, inner).map(lambda t: Rec(*t)),
            st.tuples(inner, inner).map(lambda t: App(*t)),
            st.tuples(st.sampled_from(["+", "-", "*", "=", "<", "<=", "&&", "||"]),
                      inner, inner).map(lambda t: BinOp(*t)),
            st.tuples(inner, inner, inner).map(lambda t: If(*t)),
            st.tuples(inner, inner).map(lambda t: Pair(*t)),
            inner.map(Inl),
            inner.map(Inr),
            st.tuples(inner, _names, inner, _names, inner).map(lambda t: Match(*t)),
            inner.map(lambda e: Rand(e)),
            inner.map(Load),
            st.tuples(inner, inner).map(lambda t: RandLblWrap(*t)),
        )

    from erislab.lang import RandLbl

    def RandLblWrap(a, b):
        return RandLbl(a, b)

    return st.recursive(leaves, extend, max_leaves=25)


@settings(max_examples=1000, deadline=None)
@given(_exprs())
def test_print_parse_roundtrip(e):
    e = assign_sites(e)
    assert parse_expr(print_expr(e)) == e


def test_free_vars_and_closedness():
    e = parse_expr("(rec f x (f (+ x 1)))")
    assert not free_vars(e)
    assert free_vars(BinOp("+", Var("a"), IntLit(1))) == {"a"}
