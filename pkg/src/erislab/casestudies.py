"""Example programs and randomized data structures, each paired with its
claimed error bound.

Small programs (two coins, the branching example, rejection samplers,
the escaping spline, the faulting iterator) live in the object language
so the exact engine can enumerate them.  The data structures (dynamic
vector under a faulty allocator, hash functions, hash map, Merkle trees,
WalkSAT) run at host level with injected randomness, since their state
spaces defeat enumeration and add no semantic coverage.

Host runners are bit-reproducible given a seed: all randomness flows
through a single splitmix64 stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .credits import planner_constants
from .lang import Expr, parse_expr
from .montecarlo import SplitMix64, _finalize

__all__ = [
    "TWO_COINS_SOURCE", "FIG1_SOURCE",
    "build_two_coins", "build_fig1", "build_rsamp", "build_rsamp_bd",
    "build_spline", "build_iter_demo",
    "vector_write_count", "vector_exact_failure", "run_faulty_vector",
    "birthday_collision_exact", "cumulative_hash_credit", "eps_max",
    "run_amortized_hash", "resizing_amortized_credit",
    "resizing_ledger_replay", "run_resizing_hash", "run_hashmap_insert",
    "MerkleHarness", "run_merkle", "merkle_exhaustive_soundness",
    "Clause", "Formula", "run_walksat", "iter_demo_exact", "run_iter_demo",
    "CASE_STUDIES", "CaseStudy", "run_case_study",
]

ZERO = Fraction(0)
ONE = Fraction(1)

OMEGA = "((rec f x (f x)) 0)"

TWO_COINS_SOURCE = f"(if (&& (flip) (flip)) 42 {OMEGA})"

# The branching example: draw n from {0..3}; n <= 1 answers true, n = 2
# flips a coin between true and false, n = 3 flips between false and
# divergence.  The coin is spelled once per branch so each branch has its
# own sampling site; credit schedules attach one table per site, and the
# avoidance needed here depends on n.
FIG1_SOURCE = f"""(let n (rand 3)
  (if (<= n 1)
      true
      (if (= n 2)
          (if (= (rand 1) 0) true false)
          (if (= (rand 1) 0) false {OMEGA}))))"""


def build_two_coins() -> Expr:
    return parse_expr(TWO_COINS_SOURCE)


def build_fig1() -> Expr:
    return parse_expr(FIG1_SOURCE)


def build_rsamp(m: int, n: int) -> Expr:
    """Unbounded uniform rejection sampler: draw from {0..m}, retry until
    the draw is at most n."""
    if not (m > n >= 0):
        raise ValueError("need m > n >= 0")
    return parse_expr(
        f"((rec try _ (let v (rand {m}) (if (<= v {n}) v (try unit)))) unit)")


def build_rsamp_bd(m: int, n: int, tries: int) -> Expr:
    """Bounded sampler: inr v on success within `tries` draws, inl unit
    once the budget is spent."""
    if not (m > n >= 0):
        raise ValueError("need m > n >= 0")
    if tries < 0:
        raise ValueError("tries must be a natural")
    return parse_expr(f"""
        ((rec try c
           (if (<= c 0)
               (inl unit)
               (let v (rand {m})
                 (if (<= v {n}) (inr v) (try (- c 1))))))
         {tries})""")


def build_spline(n0: int) -> Expr:
    """Escaping spline from position n0: stop with probability 1/(n+1),
    otherwise walk to n+1."""
    if n0 < 1:
        raise ValueError("spline position must be at least 1")
    return parse_expr(
        f"((rec spline n (let x (rand n) (if (= x 0) unit (spline (+ n 1))))) {n0})")


def build_iter_demo(k: int, eps: Fraction) -> Expr:
    """Draw n from {0..k}, then run n iterations of a body that crashes
    with probability eps each time."""
    eps = Fraction(eps)
    if not (0 <= eps < 1):
        raise ValueError("fault probability must be in [0, 1)")
    if k < 0:
        raise ValueError("k must be a natural")
    a, b = eps.numerator, eps.denominator
    return parse_expr(f"""
        (let n (rand {k})
          ((rec go m
             (if (<= m 0)
                 true
                 (seq (if (< (rand {b - 1}) {a}) (fst 0) unit)
                      (go (- m 1)))))
           n))""")


# ---------------------------------------------------------------------------
# Dynamic vector under a faulty allocator

def vector_write_count(m: int, initial_capacity: int = 1) -> int:
    """Total faultable writes over m pushbacks with doubling resize:
    one store each, plus r copy-writes whenever the block of size r fills."""
    if m < 0 or initial_capacity < 1:
        raise ValueError("need m >= 0 and a positive initial capacity")
    writes = 0
    size, cap = 0, initial_capacity
    for _ in range(m):
        writes += 1  # the store itself
        if size + 1 == cap:
            writes += cap  # extend: every cell of the new block is written
            cap *= 2
        size += 1
    return writes


def vector_exact_failure(p: Fraction, m: int, initial_capacity: int = 1) -> Fraction:
    """Probability that at least one of the W(m) writes faults."""
    p = Fraction(p)
    w = vector_write_count(m, initial_capacity)
    return 1 - (1 - p) ** w


def run_faulty_vector(p: Fraction, m: int, seed: int,
                      initial_capacity: int = 1) -> dict:
    """Replay m pushbacks; each write faults independently with
    probability p (a rational a/b realized as one uniform draw below b)."""
    p = Fraction(p)
    if not (0 <= p <= 1):
        raise ValueError("fault probability must be in [0, 1]")
    a, b = p.numerator, p.denominator
    rng = SplitMix64(_finalize(seed))

    def faulty_write() -> bool:
        return rng.below(b) < a

    failed = False
    writes = 0
    size, cap = 0, initial_capacity
    for _ in range(m):
        failed |= faulty_write()
        writes += 1
        if size + 1 == cap:
            for _ in range(cap):
                failed |= faulty_write()
            writes += cap
            cap *= 2
        size += 1
    return {"failed": failed, "writes": writes}


# ---------------------------------------------------------------------------
# Idealized hash functions (uniform hash assumption)

def birthday_collision_exact(n_plus_1: int, s: int) -> Fraction:
    """Exact probability that s independent uniform draws over a space of
    size n_plus_1 are not all distinct."""
    if n_plus_1 < 1 or s < 0:
        raise ValueError("bad parameters")
    prod = ONE
    for i in range(s):
        prod *= 1 - Fraction(i, n_plus_1)
    return 1 - prod


def cumulative_hash_credit(n_plus_1: int, s: int) -> Fraction:
    """Sum of the per-insert avoidance credits i/(n+1) for i < s."""
    return Fraction(s * (s - 1), 2 * n_plus_1)


def eps_max(n: int, max_queries: int) -> Fraction:
    """Amortized per-query credit (MAX-1)/(2(n+1)) for at most MAX queries
    of a lazy uniform hash over {0..n}."""
    if max_queries < 1:
        raise ValueError("need at least one query")
    return Fraction(max_queries - 1, 2 * (n + 1))


class _LazyHash:
    """Uniform lazy hash over {0..space-1} with a shared query cache."""

    def __init__(self, space: int, rng: SplitMix64):
        self.space = space
        self.rng = rng
        self.cache: dict[int, int] = {}

    def get(self, key: int) -> int:
        if key in self.cache:
            return self.cache[key]
        v = self.rng.below(self.space)
        self.cache[key] = v
        return v

    def queries(self) -> int:
        return len(self.cache)


def run_amortized_hash(n: int, max_queries: int, inserts: int, seed: int) -> dict:
    """Hash `inserts` distinct keys through the lazy uniform hash over
    {0..n}; report whether any two collide."""
    if inserts > max_queries:
        raise ValueError("inserts may not exceed the query budget")
    if inserts > n + 1:
        raise ValueError("more distinct keys than hash values forces a collision")
    h = _LazyHash(n + 1, SplitMix64(_finalize(seed)))
    seen: set[int] = set()
    collision = False
    for key in range(inserts):
        v = h.get(key)
        if v in seen:
            collision = True
        seen.add(v)
    return {"collision": collision}


# ---------------------------------------------------------------------------
# Resizing hash function and hash map

def resizing_amortized_credit(v0: int, r0: int) -> Fraction:
    return Fraction(3 * r0, 4 * v0)


def resizing_ledger_replay(v0: int, r0: int, inserts: int) -> dict:
    """Replay the credit ledger of the resizing hash for fresh inserts.

    Each insert banks the amortized credit and pays i/v to avoid the i
    occupied values; the reserve condition
        p + (r - s) * amort >= sum_{i=s}^{r-1} i/v
    must hold after every insert, and the reserve itself stays
    nonnegative.
    """
    if not (1 <= r0 <= v0):
        raise ValueError("need 1 <= R0 <= V0")
    amort = resizing_amortized_credit(v0, r0)
    v, s, r = v0, 0, r0
    p = ZERO
    rows = []
    ok = True
    resizes = 0
    for _ in range(inserts):
        assert s < r <= v
        p = p + amort - Fraction(s, v)
        if s + 1 == r:
            v, r = 2 * v, 2 * r
            resizes += 1
        s += 1
        debt = sum(Fraction(i, v) for i in range(s, r))
        holds = p >= 0 and p + (r - s) * amort >= debt
        ok = ok and holds
        rows.append({"s": s, "v": v, "r": r, "reserve": p, "holds": holds})
    return {"ok": ok, "resizes": resizes, "rows": rows, "amortized": amort}


class _ResizingHash:
    """Lazy collision-aware hash with doubling sample space, mirroring the
    resizing-hash code: fresh keys draw uniformly over {0..v-1}; when the
    (r-1)th fresh key lands, both v and r double."""

    def __init__(self, v0: int, r0: int, rng: SplitMix64):
        if not (1 <= r0 <= v0):
            raise ValueError("need 1 <= R0 <= V0")
        self.v, self.s, self.r = v0, 0, r0
        self.rng = rng
        self.map: dict[int, int] = {}
        self.used: set[int] = set()
        self.collisions = 0
        self.resizes = 0

    def get(self, key: int) -> int:
        if key in self.map:
            return self.map[key]
        b = self.rng.below(self.v)
        self.map[key] = b
        if b in self.used:
            self.collisions += 1
        self.used.add(b)
        if self.s + 1 == self.r:
            self.v *= 2
            self.r *= 2
            self.resizes += 1
        self.s += 1
        return b


def run_resizing_hash(v0: int, r0: int, inserts: int, seed: int) -> dict:
    h = _ResizingHash(v0, r0, SplitMix64(_finalize(seed)))
    for key in range(inserts):
        h.get(key)
    return {"collision": h.collisions > 0, "collisions": h.collisions,
            "resizes": h.resizes}


def run_hashmap_insert(v0: int, r0: int, keys: Sequence[int], seed: int) -> dict:
    """Table-backed set keyed by the resizing hash; a hash collision
    silently drops the newcomer, which is exactly what ok=False reports."""
    h = _ResizingHash(v0, r0, SplitMix64(_finalize(seed)))
    table: list[Optional[int]] = [None] * v0
    for w in keys:
        fresh = w not in h.map
        b = h.get(w)
        if len(table) < h.v:
            table.extend([None] * (h.v - len(table)))
        if table[b] is None:
            table[b] = w
        # occupied by w itself: duplicate insert, a no-op; occupied by
        # another key: silent drop
        del fresh
    present = {w for w in table if w is not None}
    return {"set": present, "ok": present == set(keys)}


# ---------------------------------------------------------------------------
# Merkle trees over the idealized hash

class MerkleHarness:
    """Merkle tree over the lazy uniform hash with value space 2^V.

    Proofs list (is_left_child, sibling_hash) pairs from the root level
    down to the leaf level; the checker folds them leaf-first, each level
    concatenating as high_part * 2^V + low_part.
    """

    def __init__(self, v_bits: int, height: int, leaves: Sequence[int], seed: int):
        if len(leaves) != 1 << height:
            raise ValueError(f"need exactly {1 << height} leaves")
        self.v_bits = v_bits
        self.height = height
        self.leaves = list(leaves)
        self.space = 1 << v_bits
        self.hash = _LazyHash(self.space, SplitMix64(_finalize(seed)))
        level = [self.hash.get(x) for x in leaves]
        self.levels = [level]
        while len(level) > 1:
            level = [self.hash.get(level[i] * self.space + level[i + 1])
                     for i in range(0, len(level), 2)]
            self.levels.append(level)
        self.root_hash = level[0]

    def prove(self, idx: int) -> list[tuple[bool, int]]:
        if not (0 <= idx < len(self.leaves)):
            raise IndexError("leaf index out of range")
        path = []
        for j in range(self.height):
            node = idx >> j
            path.append((node % 2 == 0, self.levels[j][node ^ 1]))
        return list(reversed(path))  # root level first

    def hash_path(self, proof: Sequence[tuple[bool, int]], leaf_value: int) -> int:
        if not proof:
            return self.hash.get(leaf_value)
        is_left, sib = proof[0]
        below = self.hash_path(proof[1:], leaf_value)
        if is_left:
            return self.hash.get(below * self.space + sib)
        return self.hash.get(sib * self.space + below)

    def check(self, proof: Sequence[tuple[bool, int]], leaf_value: int) -> bool:
        return self.hash_path(proof, leaf_value) == self.root_hash


def run_merkle(v_bits: int, height: int, leaves: Sequence[int], seed: int) -> MerkleHarness:
    return MerkleHarness(v_bits, height, leaves, seed)


def _forgeries(proof: list[tuple[bool, int]], leaf_value: int, space: int,
               leaf_space: Sequence[int]):
    """All single-entry modifications of (proof, leaf_value)."""
    for alt in leaf_space:
        if alt != leaf_value:
            yield proof, alt
    for lvl in range(len(proof)):
        b, h = proof[lvl]
        for alt in range(space):
            if alt != h:
                yield proof[:lvl] + [(b, alt)] + proof[lvl + 1:], leaf_value
        yield proof[:lvl] + [(not b, h)] + proof[lvl + 1:], leaf_value


def merkle_exhaustive_soundness(v_bits: int, height: int,
                                leaves: Sequence[int]) -> dict:
    """Count forged-proof acceptance exactly over every hash assignment.

    Enumerates the lazily-queried hash function: the tree build forks on
    each fresh query, and so does each forged check.  Returns the worst
    acceptance probability over all single-flip forgeries, plus the
    verification that honest proofs always pass.
    """
    space = 1 << v_bits
    nleaves = len(leaves)
    if nleaves != 1 << height:
        raise ValueError(f"need exactly {1 << height} leaves")

    # Enumerate builds: (weight_exponent, cache, levels).  weight is
    # space^-exponent; cache hits during the build keep exponents low.
    builds: list[tuple[int, dict[int, int], list[list[int]]]] = []

    def hash_fork(cache: dict, x: int, cont, exp: int) -> None:
        got = cache.get(x)
        if got is not None:
            cont(cache, got, exp)
            return
        for v in range(space):
            c2 = dict(cache)
            c2[x] = v
            cont(c2, v, exp + 1)

    def build_level(cache: dict, levels: list, exp: int) -> None:
        prev = levels[-1]
        if len(prev) == 1:
            builds.append((exp, cache, levels))
            return

        def combine(i: int, cache: dict, acc: list, exp: int) -> None:
            if i == len(prev):
                build_level(cache, levels + [acc], exp)
                return
            hash_fork(cache, prev[i] * space + prev[i + 1],
                      lambda c, v, e: combine(i + 2, c, acc + [v], e), exp)

        combine(0, cache, [], exp)

    def build_leaves(i: int, cache: dict, acc: list, exp: int) -> None:
        if i == nleaves:
            build_level(cache, [acc], exp)
            return
        hash_fork(cache, leaves[i], lambda c, v, e: build_leaves(i + 1, c, acc + [v], e), exp)

    build_leaves(0, {}, [], 0)

    max_exp = height + 1  # fresh queries a single check can add
    total_den = 0  # sum of build weights in units of space^-(max build exp)
    build_exp_cap = max(e for e, _, _ in builds)

    def check_accept_weight(cache: dict, proof, leaf_value: int, root: int) -> tuple[int, int]:
        """(acceptance weight, scale) with weight / space^scale the
        conditional acceptance probability given this build."""
        # worklist of (extra cache, acc hash, fresh count), folded leaf-first
        def query(extra: dict, x: int):
            got = extra.get(x)
            if got is None:
                got = cache.get(x)
            if got is not None:
                yield extra, got, 0
            else:
                for v in range(space):
                    e2 = dict(extra)
                    e2[x] = v
                    yield e2, v, 1

        states = [(e, a, f) for e, a, f in query({}, leaf_value)]
        for is_left, sib in reversed(proof):
            nxt = []
            for extra, acc, fresh in states:
                x = acc * space + sib if is_left else sib * space + acc
                for e2, v, df in query(extra, x):
                    nxt.append((e2, v, fresh + df))
            states = nxt
        weight = sum(space ** (max_exp - fresh)
                     for _, acc, fresh in states if acc == root)
        return weight, max_exp

    worst: dict = {"prob": ZERO, "forgery": None}
    honest_ok = True
    forgery_count = 0
    den = Fraction(1)

    # acceptance probability per forgery index accumulated across builds
    accum: dict[int, Fraction] = {}
    for exp, cache, levels in builds:
        root = levels[-1][0]
        build_w = Fraction(1, space ** exp)
        for idx in range(nleaves):
            proof = []
            for j in range(height):
                node = idx >> j
                proof.append((node % 2 == 0, levels[j][node ^ 1]))
            proof = list(reversed(proof))
            # honest proof must verify without any fresh query
            w, sc = check_accept_weight(cache, proof, leaves[idx], root)
            if w != space ** sc:
                honest_ok = False
            fid = 0
            for fproof, fleaf in _forgeries(proof, leaves[idx], space, leaves):
                key = (idx, fid)
                fid += 1
                w, sc = check_accept_weight(cache, list(fproof), fleaf, root)
                accum[key] = accum.get(key, ZERO) + build_w * Fraction(w, space ** sc)
            forgery_count = max(forgery_count, fid)

    worst_prob = max(accum.values()) if accum else ZERO
    return {
        "honest_always_accepted": honest_ok,
        "forgeries_per_leaf": forgery_count,
        "forgery_acceptance": accum,
        "worst_forgery_acceptance": worst_prob,
        "builds": len(builds),
    }


# ---------------------------------------------------------------------------
# WalkSAT

Clause = tuple[tuple[int, bool], tuple[int, bool], tuple[int, bool]]


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...]

    @staticmethod
    def from_json(d: dict) -> "Formula":
        clauses = []
        for c in d["clauses"]:
            if len(c) != 3:
                raise ValueError("clauses must have exactly three literals")
            clauses.append(tuple((int(i), bool(p)) for i, p in c))
        f = Formula(int(d["num_vars"]), tuple(clauses))
        for clause in f.clauses:
            for i, _ in clause:
                if not (0 <= i < f.num_vars):
                    raise ValueError(f"variable index {i} out of range")
        return f

    def satisfied_by(self, asn: Sequence[bool]) -> bool:
        return all(any(asn[i] == p for i, p in c) for c in self.clauses)


def run_walksat(formula: Formula, seed: int, flip_budget: int) -> dict:
    """Resample loop: flip a uniformly chosen variable of the first
    unsatisfied clause until the assignment satisfies the formula."""
    rng = SplitMix64(_finalize(seed))
    asn = [rng.below(2) == 1 for _ in range(formula.num_vars)]
    flips = 0
    while True:
        unsat = next((c for c in formula.clauses
                      if not any(asn[i] == p for i, p in c)), None)
        if unsat is None:
            return {"solved": True, "flips": flips, "assignment": asn}
        if flips >= flip_budget:
            return {"solved": False, "flips": flips, "assignment": asn}
        i, _ = unsat[rng.below(3)]
        asn[i] = not asn[i]
        flips += 1


# ---------------------------------------------------------------------------
# Iterator demo

def iter_demo_exact(k: int, eps: Fraction) -> Fraction:
    """E[1 - (1-eps)^n] for n uniform over {0..k}: the exact probability
    that some iteration of the faulting body crashes."""
    eps = Fraction(eps)
    return sum((1 - (1 - eps) ** n for n in range(k + 1)), ZERO) / (k + 1)


def run_iter_demo(k: int, eps: Fraction, depth: int = 192) -> dict:
    """Cross-check the enumeration of the object-language program against
    the closed-form oracle and the ht-rand-exp style bound eps*k/2."""
    from .checker import exact_bound
    from .predicates import TRUE

    eps = Fraction(eps)
    exact = iter_demo_exact(k, eps)
    bound = eps * Fraction(k, 2)
    program = build_iter_demo(k, eps)
    br = exact_bound(program, TRUE, "partial", depth)
    return {
        "exact_error": exact,
        "bound": bound,
        "holds": exact <= bound,
        "gap": bound - exact,
        "exec_lower": br.lower,
        "exec_upper": br.upper,
        "exec_matches": br.lower == exact == br.upper,
    }


# ---------------------------------------------------------------------------
# Registry for the CLI / service

@dataclass(frozen=True)
class CaseStudy:
    name: str
    defaults: dict
    run: Callable[[dict, int], dict]  # (params, seed) -> report payload


def _cs_vector(params: dict, seed: int) -> dict:
    p = Fraction(params["p"])
    m = int(params["m"])
    trials = int(params.get("trials", 2000))
    exact = vector_exact_failure(p, m)
    claimed = 3 * p * m
    fails = sum(run_faulty_vector(p, m, seed + t)["failed"] for t in range(trials))
    writes = vector_write_count(m)
    from .montecarlo import hoeffding_tolerance
    tol = hoeffding_tolerance(trials, 1e-3)
    freq = fails / trials
    return {
        "writes": writes,
        "exact_failure": exact,
        "claimed_bound": claimed,
        "exact_holds": exact <= claimed,
        "mc_trials": trials,
        "mc_freq": freq,
        "mc_tolerance": tol,
        "mc_holds": freq <= float(claimed) + tol,
        "pass": exact <= claimed and freq <= float(claimed) + tol,
    }


def _cs_amort_hash(params: dict, seed: int) -> dict:
    n = int(params["n"])
    maxq = int(params["max"])
    inserts = int(params.get("inserts", min(maxq, n + 1)))
    exact = birthday_collision_exact(n + 1, inserts)
    credit = cumulative_hash_credit(n + 1, inserts)
    total = eps_max(n, maxq) * maxq
    out = run_amortized_hash(n, maxq, inserts, seed)
    return {
        "collision_observed": out["collision"],
        "exact_collision": exact,
        "cumulative_credit": credit,
        "eps_max": eps_max(n, maxq),
        "budget_identity": total == cumulative_hash_credit(n + 1, maxq),
        "pass": exact <= credit and total == cumulative_hash_credit(n + 1, maxq),
    }


def _cs_resize_hash(params: dict, seed: int) -> dict:
    v0 = int(params["v0"])
    r0 = int(params["r0"])
    inserts = int(params.get("inserts", 4 * r0 + 1))
    replay = resizing_ledger_replay(v0, r0, inserts)
    out = run_resizing_hash(v0, r0, inserts, seed)
    return {
        "ledger_ok": replay["ok"],
        "resizes": replay["resizes"],
        "amortized": replay["amortized"],
        "collision_observed": out["collision"],
        "pass": replay["ok"],
    }


def _cs_hashmap(params: dict, seed: int) -> dict:
    v0 = int(params["v0"])
    r0 = int(params["r0"])
    count = int(params.get("keys", 8))
    keys = list(range(count))
    out = run_hashmap_insert(v0, r0, keys, seed)
    dup = run_hashmap_insert(v0, r0, keys + keys, seed)
    return {
        "ok": out["ok"],
        "set_size": len(out["set"]),
        "duplicates_noop": dup["set"] == out["set"],
        "pass": dup["set"] == out["set"],
    }


def _cs_merkle(params: dict, seed: int) -> dict:
    v_bits = int(params.get("v_bits", 2))
    height = int(params.get("height", 2))
    leaves = list(range(1 << height))
    res = merkle_exhaustive_soundness(v_bits, height, leaves)
    maxq = len(leaves) * 2 + height + 1
    budget = eps_max((1 << v_bits) - 1, maxq) * height
    worst = res["worst_forgery_acceptance"]
    ok = res["honest_always_accepted"] and worst <= budget
    return {
        "honest_always_accepted": res["honest_always_accepted"],
        "worst_forgery_acceptance": worst,
        "budget": budget,
        "builds": res["builds"],
        "pass": ok,
    }


def _cs_walksat(params: dict, seed: int) -> dict:
    import json
    import pathlib

    if "fixture" in params:
        formula = Formula.from_json(json.loads(pathlib.Path(params["fixture"]).read_text()))
    else:
        formula = Formula.from_json({
            "num_vars": 4,
            "clauses": [[[0, True], [1, True], [2, True]],
                        [[1, True], [2, True], [3, True]],
                        [[0, True], [2, True], [3, True]]],
        })
    trials = int(params.get("trials", 200))
    budget = int(params.get("flip_budget", 64 * formula.num_vars ** 2))
    solved = 0
    sound = True
    for t in range(trials):
        out = run_walksat(formula, seed + t, budget)
        if out["solved"]:
            solved += 1
            sound = sound and formula.satisfied_by(out["assignment"])
    rate = solved / trials
    return {
        "trials": trials,
        "solve_rate": rate,
        "solutions_valid": sound,
        "pass": sound and rate >= 0.99,
    }


def _cs_iter_demo(params: dict, seed: int) -> dict:
    k = int(params.get("k", 2))
    eps = Fraction(params.get("eps", "1/2"))
    out = run_iter_demo(k, eps)
    out["pass"] = out["holds"] and out["exec_matches"]
    return out


CASE_STUDIES: dict[str, CaseStudy] = {
    "vector": CaseStudy("vector", {"p": "1/100", "m": 32}, _cs_vector),
    "amort-hash": CaseStudy("amort-hash", {"n": 7, "max": 4}, _cs_amort_hash),
    "resize-hash": CaseStudy("resize-hash", {"v0": 8, "r0": 2}, _cs_resize_hash),
    "hashmap": CaseStudy("hashmap", {"v0": 16, "r0": 4, "keys": 8}, _cs_hashmap),
    "merkle": CaseStudy("merkle", {"v_bits": 2, "height": 2}, _cs_merkle),
    "walksat": CaseStudy("walksat", {}, _cs_walksat),
    "iter-demo": CaseStudy("iter-demo", {"k": 2, "eps": "1/2"}, _cs_iter_demo),
}


def run_case_study(name: str, params: dict, seed: int) -> dict:
    if name not in CASE_STUDIES:
        raise ValueError(f"unknown case study {name!r}; "
                         f"known: {', '.join(sorted(CASE_STUDIES))}")
    cs = CASE_STUDIES[name]
    merged = dict(cs.defaults)
    merged.update(params)
    out = cs.run(merged, seed)
    out["params"] = {k: str(v) for k, v in merged.items()}
    return out
