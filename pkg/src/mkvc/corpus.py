"""Shared corpora and the exhaustive small-graph sweep.

The sweep enumerates every edge subset of K(n_left,n_right) for all ordered
shapes with n_left + n_right <= max_n and every budget k < n, running the
solver battery against the exhaustive oracle and aggregating violation
counts.  Chunks are independent, so the work parallelizes over processes;
all aggregation is commutative, making results worker-count independent.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .analysis import prop1_sweep
from .generate import GenKind, GenSpec, generate
from .graph import BipartiteInstance, Side, covered_weight
from .solvers import (
    greedy_solver, solve_alg1, solve_alg2, solve_exact, solve_greedy,
    solve_top_side,
)

GREEDY_FLOOR = (63, 100)           # safe under-approximation of 1 - 1/e
ALG2_FLOOR = Fraction(67597, 100000)


def ordered_shapes(max_n: int):
    """All (n_left, n_right) with both sides nonempty and total <= max_n."""
    out = []
    for n in range(2, max_n + 1):
        for nl in range(1, n):
            out.append((nl, n - nl))
    return out


def unweighted_instance(nl: int, nr: int, gmask: int, k: int) -> BipartiteInstance:
    """Edge subset of K(nl,nr) selected by bitmask; edge id = i*nr + j."""
    edges = [(eid // nr, eid % nr, 1)
             for eid in range(nl * nr) if gmask >> eid & 1]
    return BipartiteInstance(nl, nr, edges, k)


def _merge_min(agg, key, frac):
    cur = agg.get(key)
    if frac is not None and (cur is None or frac < cur):
        agg[key] = frac


def new_aggregate() -> dict:
    return {
        "pairs": 0,
        "feasibility": 0,
        "self_consistency": 0,
        "dominance": 0,
        "greedy_floor": 0,
        "greedy_kn": 0,
        "alg2_vs_greedy": 0,
        "prop1": 0,
        "greedy_min_ratio": None,
        "alg2_min_ratio": None,
        "examples": [],
    }


def merge_aggregates(total: dict, part: dict) -> dict:
    for key in ("pairs", "feasibility", "self_consistency", "dominance",
                "greedy_floor", "greedy_kn", "alg2_vs_greedy", "prop1"):
        total[key] += part[key]
    _merge_min(total, "greedy_min_ratio", part["greedy_min_ratio"])
    _merge_min(total, "alg2_min_ratio", part["alg2_min_ratio"])
    total["examples"] = (total["examples"] + part["examples"])[:10]
    return total


def _note(agg, key, text):
    agg[key] += 1
    if len(agg["examples"]) < 10:
        agg["examples"].append(text)


def check_instance(inst: BipartiteInstance, agg: dict, tag: str,
                   run_alg2: bool = True, run_prop1: bool = True) -> None:
    """Run the battery on one instance and fold results into the aggregate."""
    k = inst.k
    base = greedy_solver()
    opt_sol = solve_exact(inst)
    opt = opt_sol.covered_weight
    agg["pairs"] += 1

    battery = [("exact", opt_sol, k)]
    g = solve_greedy(inst)
    battery.append(("greedy", g, k))
    for side in (Side.LEFT, Side.RIGHT):
        ts = solve_top_side(inst, side)
        battery.append((f"topside{side.name[0]}", ts,
                        min(k, inst.side_size(side))))
    a1 = solve_alg1(inst, min(k, inst.n_left, (k + 1) // 2), base)
    battery.append(("alg1", a1, k))
    a2 = None
    if run_alg2:
        a2 = solve_alg2(inst, 3, base)
        battery.append(("alg2", a2, k))

    for name, sol, want in battery:
        if len(sol.vertices) != want:
            _note(agg, "feasibility", f"{tag}: {name} returned "
                  f"{len(sol.vertices)} vertices, wanted {want}")
        if covered_weight(inst, sol.vertices) != sol.covered_weight:
            _note(agg, "self_consistency", f"{tag}: {name} value mismatch")
        if sol.covered_weight > opt:
            _note(agg, "dominance", f"{tag}: {name} {sol.covered_weight} > opt {opt}")

    if 100 * g.covered_weight < GREEDY_FLOOR[0] * opt:
        _note(agg, "greedy_floor", f"{tag}: greedy {g.covered_weight} vs opt {opt}")
    if inst.n * g.covered_weight < k * opt:
        _note(agg, "greedy_kn", f"{tag}: greedy below (k/n)*opt")
    if opt > 0:
        _merge_min(agg, "greedy_min_ratio", Fraction(g.covered_weight, opt))
    if a2 is not None:
        if a2.covered_weight < g.covered_weight:
            _note(agg, "alg2_vs_greedy", f"{tag}: alg2 {a2.covered_weight} "
                  f"< greedy {g.covered_weight}")
        if opt > 0:
            _merge_min(agg, "alg2_min_ratio", Fraction(a2.covered_weight, opt))

    if run_prop1 and not prop1_sweep(inst, opt_sol.vertices, opt):
        _note(agg, "prop1", f"{tag}: remaining-optimum check failed")


def sweep_chunk(args) -> dict:
    """Worker: all (graph, k) pairs for graph masks in [lo, hi) of one shape."""
    nl, nr, lo, hi, run_alg2, run_prop1 = args
    agg = new_aggregate()
    n = nl + nr
    for gmask in range(lo, hi):
        inst1 = unweighted_instance(nl, nr, gmask, 1)
        for k in range(1, n):
            inst = inst1.with_budget(k)
            check_instance(inst, agg, f"u{nl}x{nr}/g{gmask}/k{k}",
                           run_alg2=run_alg2, run_prop1=run_prop1)
    return agg


def sweep_tasks(max_n: int, chunk_graphs: int = 4096,
                run_alg2: bool = True, run_prop1: bool = True):
    """Chunked task list covering every unweighted graph with n <= max_n."""
    tasks = []
    for nl, nr in ordered_shapes(max_n):
        total = 1 << (nl * nr)
        for lo in range(0, total, chunk_graphs):
            tasks.append((nl, nr, lo, min(lo + chunk_graphs, total),
                          run_alg2, run_prop1))
    return tasks


def sampled_sweep_tasks(max_n: int, per_shape: int, seed: int,
                        run_alg2: bool = True, run_prop1: bool = True):
    """Seeded graph samples per shape, as single-graph tasks grouped in one
    chunk per shape (used by the quick verification suite)."""
    rng = random.Random(seed)
    tasks = []
    for nl, nr in ordered_shapes(max_n):
        total = 1 << (nl * nr)
        if total <= per_shape:
            tasks.append((nl, nr, 0, total, run_alg2, run_prop1))
        else:
            masks = sorted(rng.sample(range(total), per_shape))
            tasks.append(("masks", nl, nr, tuple(masks), run_alg2, run_prop1))
    return tasks


def run_task(task) -> dict:
    if task[0] == "masks":
        _, nl, nr, masks, run_alg2, run_prop1 = task
        agg = new_aggregate()
        n = nl + nr
        for gmask in masks:
            inst1 = unweighted_instance(nl, nr, gmask, 1)
            for k in range(1, n):
                check_instance(inst1.with_budget(k), agg,
                               f"u{nl}x{nr}/g{gmask}/k{k}",
                               run_alg2=run_alg2, run_prop1=run_prop1)
        return agg
    return sweep_chunk(task)


def check_chunk(named_instances, run_alg2: bool = True,
                run_prop1: bool = False) -> dict:
    """Worker for pre-built (id, instance) lists such as the random corpora."""
    agg = new_aggregate()
    for iid, inst in named_instances:
        check_instance(inst, agg, iid, run_alg2=run_alg2, run_prop1=run_prop1)
    return agg


# ---------------------------------------------------------------------------
# seeded corpora


_RANDOM_SHAPES = [(3, 3), (4, 4), (5, 5), (6, 6), (4, 8), (8, 4),
                  (2, 10), (10, 2), (5, 7), (7, 5), (3, 9), (6, 5)]
_PROBS = [0.25, 0.5, 0.75, 1.0]


def random_weighted_corpus(count: int = 1000, seed: int = 20260810):
    """Seeded random weighted instances, n <= 12, budgets spread over [1, n)."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        nl, nr = _RANDOM_SHAPES[i % len(_RANDOM_SHAPES)]
        n = nl + nr
        spec = GenSpec(
            kind=GenKind.UNIFORM_RANDOM, n_left=nl, n_right=nr,
            edge_prob=_PROBS[i % len(_PROBS)], weight_min=1, weight_max=100,
            k=rng.randint(1, n - 1), seed=seed + i,
        )
        out.append((f"rand{i:04d}", generate(spec)))
    return out


def rational_corpus(count: int = 200, seed: int = 31415926):
    """Rational-weighted instances (n <= 10) for the weight-scaling path."""
    shapes = [(2, 2), (3, 3), (4, 4), (5, 5), (2, 6), (3, 5), (4, 6), (5, 4)]
    rng = random.Random(seed)
    out = []
    for i in range(count):
        nl, nr = shapes[i % len(shapes)]
        n = nl + nr
        spec = GenSpec(
            kind=GenKind.UNIFORM_RANDOM, n_left=nl, n_right=nr,
            edge_prob=0.5 + 0.5 * ((i // len(shapes)) % 2), weight_min=1,
            weight_max=50, k=rng.randint(1, n - 1), seed=seed + i,
            rational_weights=True,
        )
        out.append((f"rat{i:03d}", generate(spec)))
    return out


def semiregular_corpus(count: int = 100, seed: int = 27182818):
    """Side-regular unweighted instances with n <= 12."""
    feasible = []
    for nl in range(1, 12):
        for nr in range(1, 12 - nl + 1):
            if nl + nr > 12:
                continue
            for dl in range(0, nr + 1):
                if (nl * dl) % nr == 0 and nl * dl // nr <= nl:
                    feasible.append((nl, nr, dl, nl * dl // nr))
    rng = random.Random(seed)
    out = []
    for i in range(count):
        nl, nr, dl, dr = feasible[rng.randrange(len(feasible))]
        n = nl + nr
        spec = GenSpec(
            kind=GenKind.SEMI_REGULAR, n_left=nl, n_right=nr,
            d_left=dl, d_right=dr, k=rng.randint(1, n - 1), seed=seed + i,
        )
        out.append((f"semi{i:03d}", generate(spec)))
    return out
