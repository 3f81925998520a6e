"""Exhaustive enumeration of small tournaments and oriented edge families.

Tournament space on ``[n]`` is indexed in mixed radix: digit ``j`` (base
``k!``) is the orientation of the ``j``-th k-subset in colex order.  A
census over an index interval is the unit of work; intervals partition the
space, so censuses can be split across processes and merged by addition.

Bulk decisions run in a compiled exhaustive-over-orders kernel (with the
last witness tried first).  Every Property O hit it reports is confirmed by
:func:`propo.decide.find_witness` before it is counted.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .core import (
    InputError,
    InvariantViolation,
    OrientedHypergraph,
    Status,
    colex_subsets,
    edges_compatible,
    lex_permutations,
    orient,
)
from .decide import find_witness, has_property_o

MAX_SPACE = 10**9
MAX_HITS = 4096
HIT_BUFFER = 1 << 20
CANONICAL_MAX_N = 8
TIGHT_MAX_N = 7
BLOCK = 1 << 22


@dataclass
class CensusReport:
    n: int
    k: int
    total_enumerated: int
    property_o_count: int
    canonical_filter_used: bool
    partition: tuple[int, int]
    wall_time: float = 0.0
    decided: int = 0
    orders_examined: int = 0
    examples: list[int] = field(default_factory=list)

    def __post_init__(self):
        start, end = self.partition
        if self.total_enumerated != end - start:
            raise InvariantViolation("total_enumerated must equal the partition length")
        if self.property_o_count > self.total_enumerated:
            raise InvariantViolation("more Property O hits than tournaments")

    def merge(self, other: "CensusReport") -> "CensusReport":
        if (self.n, self.k, self.canonical_filter_used) != (other.n, other.k, other.canonical_filter_used):
            raise InputError("cannot merge censuses of different configurations")
        a, b = sorted([self, other], key=lambda r: r.partition)
        if a.partition[1] != b.partition[0]:
            raise InputError(f"partitions {a.partition} and {b.partition} are not adjacent")
        return CensusReport(
            n=self.n,
            k=self.k,
            total_enumerated=a.total_enumerated + b.total_enumerated,
            property_o_count=a.property_o_count + b.property_o_count,
            canonical_filter_used=self.canonical_filter_used,
            partition=(a.partition[0], b.partition[1]),
            wall_time=a.wall_time + b.wall_time,
            decided=a.decided + b.decided,
            orders_examined=a.orders_examined + b.orders_examined,
            examples=(a.examples + b.examples)[:MAX_HITS],
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["partition"] = list(self.partition)
        return out


def tournament_space_size(n: int, k: int) -> int:
    return math.factorial(k) ** math.comb(n, k)


def parse_partition(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise InputError(f"partition must look like A..B, got {text!r}") from None


def split_range(start: int, stop: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, stop - start)) if stop > start else 1
    step, extra = divmod(stop - start, parts)
    out, lo = [], start
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _confirm(h: OrientedHypergraph) -> None:
    cert = find_witness(h)
    if cert.status is not Status.HAS_O:
        raise InvariantViolation(f"kernel reported Property O but DFS found witness {cert.witness_order}")


def _orientation_census(
    n: int,
    slots: tuple[tuple[int, ...], ...],
    start: int,
    stop: int,
    canonical: bool = False,
    confirm: bool = True,
) -> tuple[int, int, list[int], int]:
    """Decide every orientation of the set system ``slots`` in [start, stop).

    Returns ``(decided, property_o_count, hit_indices, orders_examined)``.
    With ``confirm`` every hit is re-decided by the DFS.
    """
    k = len(slots[0])
    cons = _kernels.consistency_table(n, slots)
    if canonical:
        slot_src, orient_map = _kernels.relabel_tables(n, slots)
    else:
        slot_src, orient_map = _kernels.empty_relabel_tables(len(slots))
    hits = np.zeros(min(stop - start, HIT_BUFFER), dtype=np.int64)
    decided, found, stored, examined = _kernels.census_range(
        cons, math.factorial(k), start, stop, hits, slot_src, orient_map, canonical
    )
    if found > stored:
        # buffer overflow: split so that every hit gets confirmed
        mid = (start + stop) // 2
        a = _orientation_census(n, slots, start, mid, canonical, confirm)
        b = _orientation_census(n, slots, mid, stop, canonical, confirm)
        return a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]
    found_idx = [int(i) for i in hits[:stored]]
    if confirm:
        for idx in found_idx:
            _confirm(_family_from_index(n, slots, idx))
    return int(decided), int(found), found_idx, int(examined)


def _family_from_index(n: int, slots, index: int) -> OrientedHypergraph:
    k = len(slots[0])
    radix = math.factorial(k)
    edges = []
    for s in slots:
        index, d = divmod(index, radix)
        edges.append(orient(s, d))
    return OrientedHypergraph(n, k, tuple(edges))


def _census_worker(args) -> CensusReport:
    n, k, start, stop, canonical = args
    t0 = time.perf_counter()
    decided, found, hits, examined = _orientation_census(n, colex_subsets(n, k), start, stop, canonical)
    examples = hits[:MAX_HITS]
    return CensusReport(
        n=n,
        k=k,
        total_enumerated=stop - start,
        property_o_count=found,
        canonical_filter_used=canonical,
        partition=(start, stop),
        wall_time=time.perf_counter() - t0,
        decided=decided,
        orders_examined=examined,
        examples=examples,
    )


def census_config_hash(n: int, k: int, partition: tuple[int, int], canonical: bool) -> str:
    payload = json.dumps({"n": n, "k": k, "partition": list(partition), "canonical": canonical}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def tournament_census(
    n: int,
    k: int,
    partition: tuple[int, int] | None = None,
    canonical_only: bool = False,
    *,
    jobs: int = 1,
    checkpoint: str | os.PathLike | None = None,
    max_space: int = MAX_SPACE,
) -> CensusReport:
    """Count the tournaments with Property O among indices in ``partition``.

    With ``canonical_only`` only orbit-minimal tournaments (under vertex
    relabeling) are decided; ``total_enumerated`` still counts the whole
    interval and ``decided`` the representatives.
    """
    if not 2 <= k <= n:
        raise InputError(f"need 2 <= k <= n, got n={n}, k={k}")
    space = tournament_space_size(n, k)
    if partition is None:
        if space > max_space:
            raise InputError(
                f"tournament space for n={n}, k={k} has {space} members (> {max_space}); "
                "give an explicit partition"
            )
        partition = (0, space)
    start, stop = partition
    if not 0 <= start <= stop <= space:
        raise InputError(f"partition {partition} outside 0..{space}")
    if stop >= 2**63:
        raise InputError("partition indices must fit in 64 bits")
    if canonical_only and n > CANONICAL_MAX_N:
        raise InputError(f"canonical filtering refused for n > {CANONICAL_MAX_N}")

    config_hash = census_config_hash(n, k, partition, canonical_only)
    report = CensusReport(n, k, 0, 0, canonical_only, (start, start))
    if checkpoint is not None and os.path.exists(checkpoint):
        report = _load_checkpoint(checkpoint, config_hash)

    cursor = report.partition[1]
    while cursor < stop:
        hi = min(stop, cursor + BLOCK * max(1, jobs))
        chunks = split_range(cursor, hi, jobs)
        work = [(n, k, a, b, canonical_only) for a, b in chunks]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_census_worker, work))
        else:
            parts = [_census_worker(w) for w in work]
        for part in parts:
            report = report.merge(part)
        cursor = hi
        if checkpoint is not None:
            _save_checkpoint(checkpoint, config_hash, report)
    return report


def _save_checkpoint(path, config_hash: str, report: CensusReport) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump({"config_hash": config_hash, "last_completed": report.partition[1], "report": report.to_json()}, fh)
    os.replace(tmp, path)


def _load_checkpoint(path, config_hash: str) -> CensusReport:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("config_hash") != config_hash:
        raise InputError(f"checkpoint {path} was written for a different configuration")
    rep = data["report"]
    rep["partition"] = tuple(rep["partition"])
    return CensusReport(**rep)


# --- canonical forms ----------------------------------------------------------


def canonical_key(h: OrientedHypergraph, sigma) -> tuple:
    return tuple(sorted(tuple(sigma[v] for v in e) for e in h.edges))


def canonical_form(h: OrientedHypergraph, max_n: int = CANONICAL_MAX_N) -> OrientedHypergraph:
    """Relabeling of ``h`` whose sorted edge list is lexicographically least."""
    if h.n > max_n:
        raise InputError(f"canonical form refused for n={h.n} > {max_n}")
    best = min(canonical_key(h, sigma) for sigma in itertools.permutations(range(h.n)))
    return OrientedHypergraph(h.n, h.k, best)


def canonical_set_systems(n: int, k: int, m: int) -> list[tuple[tuple[int, ...], ...]]:
    """One representative per S_n-orbit of m-element families of k-subsets."""
    subsets = colex_subsets(n, k)
    index = {s: i for i, s in enumerate(subsets)}
    sigmas = list(itertools.permutations(range(n)))
    maps = [[index[tuple(sorted(sig[v] for v in s))] for s in subsets] for sig in sigmas]
    reps = []
    for combo in itertools.combinations(range(len(subsets)), m):
        if all(tuple(sorted(mp[i] for i in combo)) >= combo for mp in maps):
            reps.append(tuple(subsets[i] for i in combo))
    return reps


# --- minimum edge search --------------------------------------------------------


@dataclass
class MinEdgesResult:
    status: str  # FOUND, NONE or INDETERMINATE
    n: int
    k: int
    max_edges: int
    minimum: int | None = None
    family: OrientedHypergraph | None = None
    certificate: str = ""
    checkpoint: dict | None = None
    families_decided: int = 0

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "n": self.n,
            "k": self.k,
            "max_edges": self.max_edges,
            "minimum": self.minimum,
            "family": [list(e) for e in self.family.edges] if self.family else None,
            "certificate": self.certificate,
            "checkpoint": self.checkpoint,
            "families_decided": self.families_decided,
        }


class _OutOfTime(Exception):
    def __init__(self, system: int, index: int):
        self.system = system
        self.index = index


def _search_level(n, k, m, deadline, system0, index0, counter) -> OrientedHypergraph | None:
    """First Property O family with exactly m edges on [n], or None."""
    systems = canonical_set_systems(n, k, m)
    space = math.factorial(k) ** m
    for si in range(system0, len(systems)):
        slots = systems[si]
        lo = index0 if si == system0 else 0
        while lo < space:
            if deadline is not None and time.monotonic() > deadline:
                raise _OutOfTime(si, lo)
            hi = min(space, lo + BLOCK)
            _, found, ex, _ = _orientation_census(n, slots, lo, hi, confirm=False)
            counter[0] += hi - lo
            if found:
                h = _family_from_index(n, slots, ex[0])
                _confirm(h)
                return h
            lo = hi
    return None


def min_edges_search(
    n: int,
    k: int,
    max_edges: int | None = None,
    budget_seconds: float | None = None,
    resume: dict | None = None,
) -> MinEdgesResult:
    """Least edge count of an oriented k-graph on at most n vertices with Property O.

    Families with fewer than k! edges are excluded by counting.  Property O
    is monotone under adding edges, so the largest admissible size is
    searched first: if nothing there has Property O, nothing smaller does
    (any smaller family extends to one of that size).  Otherwise sizes are
    scanned upward from k!.  Families on fewer vertices are covered by
    isolated vertices.

    On budget exhaustion the result is INDETERMINATE and carries a
    ``checkpoint`` dict to pass back as ``resume``.
    """
    if k < 2 or n < 0:
        raise InputError(f"need k >= 2 and n >= 0, got n={n}, k={k}")
    full = math.comb(n, k) if n >= k else 0
    top = full if max_edges is None else min(max_edges, full)
    result = MinEdgesResult("NONE", n, k, full if max_edges is None else max_edges)
    low = math.factorial(k)
    if top < low:
        result.certificate = f"counting bound: Property O needs at least {low} edges, at most {top} fit"
        return result
    # step 0 decides the top size; steps 1.. scan low, low+1, ..., top-1
    levels = [top] + list(range(low, top))
    step, system0, index0 = 0, 0, 0
    if resume:
        step, system0, index0 = resume["step"], resume["system"], resume["index"]
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    counter = [0]
    top_family = None
    while step < len(levels):
        m = levels[step]
        try:
            hit = _search_level(n, k, m, deadline, system0, index0, counter)
        except _OutOfTime as stop:
            result.status = "INDETERMINATE"
            result.checkpoint = {"step": step, "system": stop.system, "index": stop.index}
            result.families_decided = counter[0]
            return result
        system0 = index0 = 0
        result.families_decided = counter[0]
        if step == 0:
            if hit is None:
                result.certificate = (
                    f"no family with {top} edges on {n} vertices has Property O; "
                    f"monotonicity extends this to every size {low}..{top}"
                )
                return result
            top_family = hit
        elif hit is not None:
            return _found(result, m, hit)
        step += 1
    if top_family is None:
        # resumed past step 0, where a hit was already established
        top_family = _search_level(n, k, top, None, 0, 0, counter)
    return _found(result, top, top_family)


def _found(result: MinEdgesResult, m: int, family: OrientedHypergraph) -> MinEdgesResult:
    result.status = "FOUND"
    result.minimum = m
    result.family = family
    result.certificate = f"no Property O family below {m} edges; family verified by DFS"
    return result


# --- tight families ---------------------------------------------------------------


@dataclass
class TightResult:
    n: int
    k: int
    status: str  # FOUND or NONE
    family: OrientedHypergraph | None = None
    candidates_checked: int = 0
    nodes: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "status": self.status,
            "family": [list(e) for e in self.family.edges] if self.family else None,
            "candidates_checked": self.candidates_checked,
            "nodes": self.nodes,
        }


def tight_family_search(n: int, k: int, max_n: int = TIGHT_MAX_N) -> TightResult:
    """Look for a Property O family with exactly k! edges on [n].

    Such a family must make every order consistent with exactly one edge,
    so its edges are pairwise incompatible.  Candidates are cliques of the
    incompatibility graph on distinct underlying sets; the first edge is
    fixed to (0, 1, ..., k-1) by relabeling.  Survivors are decided exactly.
    """
    if n > max_n:
        raise InputError(f"tight family search refused for n={n} > {max_n}")
    if k < 2:
        raise InputError(f"need k >= 2, got {k}")
    size = math.factorial(k)
    result = TightResult(n, k, "NONE")
    if n < k or math.comb(n, k) < size:
        return result
    edges = [orient(s, p) for s in colex_subsets(n, k) for p in range(size)]
    sets = [frozenset(e) for e in edges]
    adj = [set() for _ in edges]
    for i, j in itertools.combinations(range(len(edges)), 2):
        if sets[i] != sets[j] and not edges_compatible(edges[i], edges[j]):
            adj[i].add(j)
            adj[j].add(i)
    first = edges.index(tuple(range(k)))

    def extend(clique: list[int], cand: list[int]) -> OrientedHypergraph | None:
        result.nodes += 1
        if len(clique) == size:
            h = OrientedHypergraph(n, k, tuple(edges[i] for i in clique))
            result.candidates_checked += 1
            if has_property_o(h):
                return h
            return None
        if len(clique) + len(cand) < size:
            return None
        for idx, v in enumerate(cand):
            found = extend(clique + [v], [w for w in cand[idx + 1:] if w in adj[v]])
            if found is not None:
                return found
        return None

    family = extend([first], sorted(adj[first]))
    if family is not None:
        if not has_property_o(family):
            raise InvariantViolation("tight family failed re-verification")
        result.status = "FOUND"
        result.family = family
    return result


def random_families(rng: np.random.Generator, n: int, k: int, m: int, count: int) -> Iterable[OrientedHypergraph]:
    """Uniform random oriented k-graphs with m edges on [n]."""
    subsets = colex_subsets(n, k)
    perms = lex_permutations(k)
    for _ in range(count):
        chosen = rng.choice(len(subsets), size=m, replace=False)
        yield OrientedHypergraph(
            n, k, tuple(orient(subsets[i], int(rng.integers(len(perms)))) for i in chosen)
        )

