"""Pinned recipes that re-run each headline claim and report PASS or FAIL."""

from __future__ import annotations

import itertools
import math
import time
from typing import Callable

from .bounds import union_bound_threshold
from .construct import build_gk
from .core import LinearOrder, OrientedHypergraph, consistent_order_count, cycle3, is_consistent
from .decide import find_witness, naive_property_o
from .core import Status
from .enumeration import min_edges_search, tight_family_search, tournament_census
from .stochastic import SampleConfig, thm2_experiment

PHASE1_SEED = 20160810
PHASE1_CASES = ((3, 6), (4, 6), (6, 8))


def _g(k: int) -> dict:
    h, _ = build_gk(k)
    t0 = time.perf_counter()
    cert = find_witness(h)
    elapsed = time.perf_counter() - t0
    return {
        "passed": cert.status is Status.HAS_O and h.m >= math.factorial(k),
        "n": h.n,
        "m": h.m,
        "status": cert.status.value,
        "nodes_expanded": cert.nodes_expanded,
        "wall_time": elapsed,
    }


def _thm1_lower() -> dict:
    mismatches = []
    for n in range(2, 7):
        for k in range(2, n + 1):
            edge = tuple(range(k))
            count = sum(1 for p in itertools.permutations(range(n)) if is_consistent(edge, LinearOrder(p)))
            if count != consistent_order_count(n, k):
                mismatches.append((n, k, count))
    positives = [cycle3(), build_gk(3)[0]]
    below = [h.m for h in positives if naive_property_o(h) and h.m < math.factorial(h.k)]
    return {"passed": not mismatches and not below, "count_mismatches": mismatches, "positives_below_bound": below}


def _n5k3() -> dict:
    rep = tournament_census(5, 3)
    return {
        "passed": rep.total_enumerated == 6**10 and rep.property_o_count == 0,
        "total_enumerated": rep.total_enumerated,
        "property_o_count": rep.property_o_count,
    }


def _f2() -> dict:
    none_small = [min_edges_search(n, 2, max_edges=2) for n in (2, 3, 4)]
    found = min_edges_search(3, 2)
    return {
        "passed": all(r.status == "NONE" for r in none_small) and found.minimum == 3 and naive_property_o(cycle3()),
        "minimum": found.minimum,
        "family": [list(e) for e in found.family.edges] if found.family else None,
    }


def _tight_k3() -> dict:
    results = {n: tight_family_search(n, 3).status for n in range(3, 7)}
    return {"passed": all(s == "NONE" for s in results.values()), "status_by_n": results}


def _eq4() -> dict:
    threshold, certs = union_bound_threshold(100)
    tail = [c for c in certs if threshold is not None and c.k >= threshold]
    return {
        "passed": threshold is not None and all(c.certified and c.signs_agree for c in tail),
        "threshold": threshold,
        "k_max": 100,
    }


def _phase1(trials: int = 10_000) -> dict:
    out = {"passed": True}
    for k, n in PHASE1_CASES:
        s = thm2_experiment(SampleConfig(n, k, trials, PHASE1_SEED))
        out[f"k{k}_n{n}"] = s.to_json()
        out["passed"] &= s.claim_violations == 0 and s.claim_checked > 0
    return out


RECIPES: dict[str, Callable[[], dict]] = {
    "thm1-lower": _thm1_lower,
    "g2": lambda: _g(2),
    "g3": lambda: _g(3),
    "n5k3-census": _n5k3,
    "f2": _f2,
    "tight-k3": _tight_k3,
    "eq4-scan": _eq4,
    "phase1-claim": _phase1,
}


def reproduce(claim_id: str) -> dict:
    if claim_id not in RECIPES:
        raise KeyError(claim_id)
    result = RECIPES[claim_id]()
    result["claim"] = claim_id
    return result


def single_edge() -> OrientedHypergraph:
    return OrientedHypergraph(2, 2, ((0, 1),))
