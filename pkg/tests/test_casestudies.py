import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from erislab.casestudies import (CASE_STUDIES, Formula, birthday_collision_exact,
                                 build_fig1, build_iter_demo, build_rsamp,
                                 build_rsamp_bd, build_spline, build_two_coins,
                                 cumulative_hash_credit, eps_max,
                                 iter_demo_exact, merkle_exhaustive_soundness,
                                 resizing_amortized_credit,
                                 resizing_ledger_replay, run_amortized_hash,
                                 run_case_study, run_faulty_vector,
                                 run_hashmap_insert, run_iter_demo, run_merkle,
                                 run_resizing_hash, run_walksat,
                                 vector_exact_failure, vector_write_count)
from erislab.checker import exact_bound, tail_bound
from erislab.distr import Distr
from erislab.lang import Config, State, VInt, parse_expr, print_expr
from erislab.montecarlo import hoeffding_tolerance
from erislab.predicates import PIsInr, PTrue, TRUE
from erislab.semantics import exec_n

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def test_corpus_files_match_builders():
    pairs = {
        "two_coins.eris": build_two_coins(),
        "fig1.eris": build_fig1(),
        "rsamp_1_0.eris": build_rsamp(1, 0),
        "rsamp_bd_1_0_3.eris": build_rsamp_bd(1, 0, 3),
        "spline_1.eris": build_spline(1),
        "iter_demo_2_half.eris": build_iter_demo(2, F(1, 2)),
    }
    for name, built in pairs.items():
        parsed = parse_expr((CORPUS / name).read_text())
        assert parsed == built, name


def test_corpus_files_roundtrip():
    for path in sorted(CORPUS.glob("*.eris")):
        e = parse_expr(path.read_text())
        assert parse_expr(print_expr(e)) == e, path.name


def test_two_coins_distribution():
    r = exec_n(Config(build_two_coins(), State()), 20)
    assert r.values == Distr({VInt(42): F(1, 4)})
    assert r.residual_mass == F(3, 4) and r.stuck_mass == 0


def test_rsamp_bd_matches_tail_bound():
    post = PIsInr(PTrue())
    b = exact_bound(build_rsamp_bd(1, 0, 3), post, "total", 50)
    assert b.lower == b.upper == tail_bound(1, 0, 3) == F(1, 8)
    assert exact_bound(build_rsamp_bd(2, 0, 0), post, "total", 10).upper == 1


def test_spline_survival_formula():
    # exact survival after k+1 samples from position n equals n/(n+k+1)
    for n in (1, 2, 3):
        for k in range(6):
            depth = 5 + 6 * k
            r = exec_n(Config(build_spline(n), State()), depth)
            assert r.stuck_mass == 0
            assert r.residual_mass == F(n, n + k + 1), (n, k)


def test_spline_immediate_stop_probability():
    for n in (1, 2, 3, 5):
        r = exec_n(Config(build_spline(n), State()), 5)
        assert r.values.mass() == F(1, n + 1)


# --- faulty vector ----------------------------------------------------------

def test_vector_write_count_doubling():
    assert vector_write_count(1) == 2
    assert vector_write_count(16) == 47
    assert vector_write_count(64) == 191


def test_vector_exact_bound_grid():
    for p in (F(1, 100), F(1, 50)):
        for m in (16, 32, 64):
            assert vector_exact_failure(p, m) <= 3 * p * m


def test_vector_never_fails_at_zero_probability():
    out = run_faulty_vector(F(0), 32, seed=1)
    assert out == {"failed": False, "writes": vector_write_count(32)}


def test_vector_run_reproducible():
    a = run_faulty_vector(F(1, 10), 16, seed=9)
    b = run_faulty_vector(F(1, 10), 16, seed=9)
    assert a == b


def test_vector_monte_carlo_within_tolerance():
    p, m, trials = F(1, 100), 16, 4000
    fails = sum(run_faulty_vector(p, m, seed=100 + t)["failed"]
                for t in range(trials))
    tol = hoeffding_tolerance(trials, 1e-3)
    assert fails / trials <= float(3 * p * m) + tol


# --- hash functions ---------------------------------------------------------

def test_birthday_oracle_example():
    assert birthday_collision_exact(4, 3) == F(5, 8)
    assert cumulative_hash_credit(4, 3) == F(3, 4)
    assert birthday_collision_exact(4, 1) == 0


def test_birthday_bound_grid():
    for n_plus_1 in (4, 8, 16):
        for s in range(n_plus_1 + 1):
            assert (birthday_collision_exact(n_plus_1, s)
                    <= cumulative_hash_credit(n_plus_1, s))


def test_eps_max_budget_identity():
    for n in (3, 7, 15):
        for maxq in (2, 4, 9):
            assert eps_max(n, maxq) * maxq == cumulative_hash_credit(n + 1, maxq)
    assert eps_max(7, 4) == F(3, 16)


def test_amortized_hash_single_insert_never_collides():
    assert run_amortized_hash(7, 4, 1, seed=5) == {"collision": False}


def test_resizing_ledger_replay_epochs():
    for v0, r0 in ((8, 2), (16, 4)):
        inserts = 8 * r0  # at least three resize epochs
        out = resizing_ledger_replay(v0, r0, inserts)
        assert out["ok"] and out["resizes"] >= 3
        assert out["amortized"] == resizing_amortized_credit(v0, r0)


def test_resizing_hash_zero_inserts():
    out = run_resizing_hash(8, 2, 0, seed=3)
    assert out == {"collision": False, "collisions": 0, "resizes": 0}


def test_resizing_hash_reproducible():
    assert run_resizing_hash(8, 2, 20, seed=3) == run_resizing_hash(8, 2, 20, seed=3)


def test_hashmap_duplicate_insert_is_noop():
    # with a huge value space nothing collides, so ok=True certifies that
    # the duplicate inserts neither dropped nor duplicated anything
    out = run_hashmap_insert(1 << 12, 4, [5, 6, 7, 5, 6, 7], seed=2)
    assert out["ok"] and out["set"] == {5, 6, 7}
    ref = run_hashmap_insert(1 << 12, 4, [5, 6, 7], seed=2)
    assert ref["set"] == out["set"]


def test_hashmap_collision_free_run_represents_set():
    # large table: collisions have low probability; find a clean seed
    keys = list(range(8))
    for seed in range(20):
        out = run_hashmap_insert(1 << 16, 32, keys, seed=seed)
        if out["ok"]:
            assert out["set"] == set(keys)
            return
    raise AssertionError("no collision-free seed found in 20 tries")


def test_hashmap_empty():
    out = run_hashmap_insert(8, 2, [], seed=0)
    assert out == {"set": set(), "ok": True}


# --- Merkle -----------------------------------------------------------------

def test_merkle_honest_proofs_validate():
    h = run_merkle(4, 3, list(range(8)), seed=11)
    for idx in range(8):
        assert h.check(h.prove(idx), h.leaves[idx])


def test_merkle_forged_leaf_rejected_whp():
    h = run_merkle(8, 3, list(range(8)), seed=11)
    proof = h.prove(2)
    rejected = sum(not h.check(proof, 100 + i) for i in range(16))
    assert rejected >= 15  # forgery needs a hash collision to pass


def test_merkle_exhaustive_tiny_scale():
    res = merkle_exhaustive_soundness(2, 2, [0, 1, 2, 3])
    assert res["honest_always_accepted"]
    maxq = 4 * 2 + 3
    budget = eps_max(3, maxq) * 2
    assert res["worst_forgery_acceptance"] <= budget
    assert all(p <= budget for p in res["forgery_acceptance"].values())


def test_merkle_mc_forgery_frequency():
    # random forged sibling hashes at realistic width stay within the
    # amortized budget
    from erislab.montecarlo import SplitMix64
    v_bits, height = 8, 3
    trials = 400
    accepted = 0
    for t in range(trials):
        h = run_merkle(v_bits, height, list(range(8)), seed=t)
        rng = SplitMix64(1_000_000 + t)
        idx = rng.below(8)
        proof = h.prove(idx)
        lvl = rng.below(height)
        b, sib = proof[lvl]
        proof[lvl] = (b, (sib + 1 + rng.below((1 << v_bits) - 1)) % (1 << v_bits))
        accepted += h.check(proof, h.leaves[idx])
    maxq = 8 * 2 + height + 1
    budget = float(eps_max((1 << v_bits) - 1, maxq) * height)
    tol = hoeffding_tolerance(trials, 1e-3)
    assert accepted / trials <= budget + tol


# --- WalkSAT ----------------------------------------------------------------

def _load_formula(name: str) -> Formula:
    return Formula.from_json(json.loads((FIXTURES / name).read_text()))


def test_walksat_solution_satisfies_formula():
    f = _load_formula("walksat_sat_small.json")
    out = run_walksat(f, seed=4, flip_budget=64 * f.num_vars ** 2)
    assert out["solved"] and f.satisfied_by(out["assignment"])


def test_walksat_sat_fixture_solves_whp():
    f = _load_formula("walksat_sat_small.json")
    budget = 64 * f.num_vars ** 2
    trials = 10_000
    solved = 0
    for t in range(trials):
        out = run_walksat(f, seed=t, flip_budget=budget)
        if out["solved"]:
            assert f.satisfied_by(out["assignment"])
            solved += 1
    assert solved / trials >= 0.99


def test_walksat_unsat_never_solves():
    f = _load_formula("walksat_unsat.json")
    for t in range(50):
        assert not run_walksat(f, seed=t, flip_budget=64)["solved"]


# --- iterator demo ----------------------------------------------------------

def test_iter_demo_exact_value():
    assert iter_demo_exact(2, F(1, 2)) == F(5, 12)
    assert iter_demo_exact(5, F(0)) == 0


def test_iter_demo_exec_matches_oracle():
    out = run_iter_demo(2, F(1, 2))
    assert out["exec_matches"] and out["holds"]
    assert out["exact_error"] == F(5, 12) and out["bound"] == F(1, 2)
    assert out["gap"] == F(1, 12)


def test_iter_demo_bound_grid():
    for k in (0, 1, 2, 3):
        for eps in (F(0), F(1, 4), F(1, 10)):
            assert iter_demo_exact(k, eps) <= eps * F(k, 2)


# --- registry ---------------------------------------------------------------

def test_case_study_registry_all_pass():
    for name in CASE_STUDIES:
        params = {}
        if name == "vector":
            params = {"trials": 300}
        if name == "walksat":
            params = {"trials": 100}
        out = run_case_study(name, params, seed=7)
        assert out["pass"], (name, out)


def test_case_study_unknown_name():
    with pytest.raises(ValueError):
        run_case_study("nope", {}, seed=0)
