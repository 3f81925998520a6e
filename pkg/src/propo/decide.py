"""Exact Property O decision procedures.

:func:`find_witness` is the main decider: a depth-first construction of a
linear order, smallest position first, pruned as soon as the placed prefix
fully contains an edge in its own orientation.  :func:`naive_property_o`
and :func:`cycle_oracle_k2` are independent oracles used for
cross-validation.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

from .core import (
    InputError,
    InvariantViolation,
    LinearOrder,
    OrientedHypergraph,
    Status,
    WitnessCertificate,
    is_consistent,
)

DEFAULT_MAX_N = 10


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int | None = None
    max_seconds: float | None = None

    @property
    def unlimited(self) -> bool:
        return self.max_nodes is None and self.max_seconds is None


class _BudgetExhausted(Exception):
    pass


def find_witness(
    h: OrientedHypergraph,
    budget: SearchBudget | None = None,
    *,
    heuristic: str = "ascending",
    allow_large: bool = False,
) -> WitnessCertificate:
    """Search for a linear order with no consistent edge.

    Returns a certificate with status ``FAILS_O`` (and the witness order),
    ``HAS_O`` once the pruned permutation tree is exhausted, or
    ``INDETERMINATE`` when ``budget`` runs out first.

    ``heuristic="fewest"`` tries first the vertex whose placement advances
    the fewest edges, which tends to reach witnesses sooner.  Instances with
    ``n > 10`` and no budget are refused unless ``allow_large`` is set.
    """
    budget = budget or SearchBudget()
    if heuristic not in ("ascending", "fewest"):
        raise InputError(f"unknown heuristic {heuristic!r}")
    if h.n > DEFAULT_MAX_N and budget.unlimited and not allow_large:
        raise InputError(
            f"n={h.n} exceeds {DEFAULT_MAX_N}; pass a budget or allow_large=True"
        )

    n, k = h.n, h.k
    edges = h.edges
    incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ei, e in enumerate(edges):
        for pos, v in enumerate(e):
            incident[v].append((ei, pos))
    # progress[e]: length of the longest prefix of edge e placed in tuple order
    progress = [0] * len(edges)
    placed = [False] * n
    perm: list[int] = []
    nodes = 0
    deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
    max_nodes = budget.max_nodes

    def advances(v: int) -> int:
        return sum(1 for ei, pos in incident[v] if progress[ei] == pos)

    def dfs() -> bool:
        nonlocal nodes
        if len(perm) == n:
            return True
        candidates = [v for v in range(n) if not placed[v]]
        if heuristic == "fewest":
            candidates.sort(key=advances)
        for v in candidates:
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                raise _BudgetExhausted
            if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
                raise _BudgetExhausted
            bumped = []
            complete = False
            for ei, pos in incident[v]:
                if progress[ei] == pos:
                    progress[ei] = pos + 1
                    bumped.append(ei)
                    if pos + 1 == k:
                        complete = True
            if not complete:
                placed[v] = True
                perm.append(v)
                if dfs():
                    return True
                perm.pop()
                placed[v] = False
            for ei in bumped:
                progress[ei] -= 1
        return False

    try:
        found = dfs()
    except _BudgetExhausted:
        return WitnessCertificate(Status.INDETERMINATE, None, "dfs", nodes_expanded=nodes)

    if found:
        order = LinearOrder(tuple(perm))
        if any(is_consistent(e, order) for e in edges):
            raise InvariantViolation("DFS produced a witness with a consistent edge")
        return WitnessCertificate(Status.FAILS_O, order, "dfs", nodes_expanded=nodes)
    if n >= k and h.m < math.factorial(k):
        raise InvariantViolation(
            f"Property O with {h.m} < {k}! edges contradicts the counting bound"
        )
    return WitnessCertificate(Status.HAS_O, None, "dfs", nodes_expanded=nodes)


def has_property_o(h: OrientedHypergraph) -> bool:
    cert = find_witness(h, SearchBudget())
    return cert.status is Status.HAS_O


def naive_witness(h: OrientedHypergraph, max_n: int = DEFAULT_MAX_N) -> WitnessCertificate:
    """Enumerate all n! orders; the first one with no consistent edge is the witness."""
    if h.n > max_n:
        raise InputError(f"naive enumeration refused for n={h.n} > {max_n}")
    examined = 0
    for perm in itertools.permutations(range(h.n)):
        examined += 1
        order = LinearOrder(perm)
        if not any(is_consistent(e, order) for e in h.edges):
            return WitnessCertificate(Status.FAILS_O, order, "naive", orders_examined=examined)
    return WitnessCertificate(Status.HAS_O, None, "naive", orders_examined=examined)


def naive_property_o(h: OrientedHypergraph, max_n: int = DEFAULT_MAX_N) -> bool:
    return naive_witness(h, max_n).status is Status.HAS_O


def cycle_oracle_k2(h: OrientedHypergraph) -> bool:
    """For 2-graphs: Property O holds iff the digraph has a directed cycle."""
    if h.k != 2:
        raise InputError(f"cycle oracle needs k = 2, got k = {h.k}")
    out = [[] for _ in range(h.n)]
    indeg = [0] * h.n
    for a, b in h.edges:
        out[a].append(b)
        indeg[b] += 1
    # Kahn: a cycle exists iff some vertex is never freed
    stack = [v for v in range(h.n) if indeg[v] == 0]
    freed = 0
    while stack:
        v = stack.pop()
        freed += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return freed < h.n


def decide(h: OrientedHypergraph, method: str = "dfs", budget: SearchBudget | None = None) -> WitnessCertificate:
    if method == "dfs":
        return find_witness(h, budget)
    if method == "naive":
        return naive_witness(h)
    raise InputError(f"unknown method {method!r}")
