"""Uniform random tournaments, Monte Carlo estimates and the Phase-1 witness heuristic.

Randomness: every trial draws from its own PCG64 stream seeded by
``numpy.random.SeedSequence(seed, spawn_key=(trial_index,))``.  Results
therefore depend only on ``(seed, trial_index)``, never on how trials are
scheduled across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import (
    InputError,
    InvariantViolation,
    LinearOrder,
    Tournament,
    colex_subsets,
    is_consistent,
)


@dataclass(frozen=True)
class SampleConfig:
    n: int
    k: int
    trials: int
    seed: int

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise InputError(f"need 2 <= k <= n, got n={self.n}, k={self.k}")
        if self.trials < 1:
            raise InputError("trials must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")


def trial_generator(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial_index,))))


def sample_orientation(n: int, k: int, seed: int, trial_index: int) -> np.ndarray:
    rng = trial_generator(seed, trial_index)
    return rng.integers(0, math.factorial(k), size=math.comb(n, k), dtype=np.int64)


def sample_tournament(cfg: SampleConfig, trial_index: int) -> Tournament:
    """Uniform member of the k-tournaments on [n] for this trial's stream."""
    digits = sample_orientation(cfg.n, cfg.k, cfg.seed, trial_index)
    return Tournament(cfg.n, cfg.k, tuple(int(d) for d in digits))


def sample_matrix(n: int, k: int, seed: int, start: int, stop: int) -> np.ndarray:
    """Orientation vectors of trials ``start..stop-1``, one row each."""
    out = np.empty((stop - start, math.comb(n, k)), dtype=np.int64)
    for row, t in enumerate(range(start, stop)):
        out[row] = sample_orientation(n, k, seed, t)
    return out


@dataclass
class Estimate:
    fraction: float
    ci95: float
    trials: int
    successes: int
    exact: bool = False

    @property
    def stderr(self) -> float:
        p = self.fraction
        return math.sqrt(p * (1 - p) / self.trials) if not self.exact else 0.0

    def to_json(self) -> dict:
        return {
            "fraction": self.fraction,
            "ci95": self.ci95,
            "trials": self.trials,
            "successes": self.successes,
            "exact": self.exact,
        }


def _count_block(args) -> int:
    n, k, seed, start, stop = args
    rows = sample_matrix(n, k, seed, start, stop)
    cons = _kernels.consistency_table(n, colex_subsets(n, k))
    return int(_kernels.decide_rows(cons, rows).sum())


def estimate_property_o_probability(cfg: SampleConfig, *, exact: bool = False, jobs: int = 1) -> Estimate:
    """Fraction of sampled tournaments with Property O and a 95% half-width.

    Each sample is decided exactly by exhausting all n! orders.  With
    ``exact=True`` the whole tournament space is enumerated instead and the
    half-width is zero.
    """
    if cfg.trials < 1:
        raise InputError("trials must be positive")
    if math.factorial(cfg.n) > 10**6:
        raise InputError(f"n={cfg.n} is beyond exact per-sample decision")
    if exact:
        from .enumeration import tournament_census

        rep = tournament_census(cfg.n, cfg.k)
        return Estimate(rep.property_o_count / rep.total_enumerated, 0.0, rep.total_enumerated, rep.property_o_count, True)
    bounds = _blocks(cfg.trials, max(jobs, 1) * 4 if jobs > 1 else 1)
    work = [(cfg.n, cfg.k, cfg.seed, a, b) for a, b in bounds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            successes = sum(pool.map(_count_block, work))
    else:
        successes = sum(map(_count_block, work))
    p = successes / cfg.trials
    return Estimate(p, 1.96 * math.sqrt(p * (1 - p) / cfg.trials), cfg.trials, successes)


def _blocks(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // parts)
    return [(a, min(total, a + step)) for a in range(0, total, step)]


def mean_consistent_count(cfg: SampleConfig) -> tuple[float, float]:
    """Sample mean and standard error of |C(T)|, the edges consistent with 0<1<...<n-1.

    Orientation index 0 is the increasing tuple, so |C(T)| counts zero digits.
    """
    counts = (sample_matrix(cfg.n, cfg.k, cfg.seed, 0, cfg.trials) == 0).sum(axis=1)
    return float(counts.mean()), float(counts.std(ddof=1) / math.sqrt(cfg.trials))


# --- the two-phase witness heuristic -------------------------------------------


@dataclass
class Thm2Trace:
    consistent_set: list[tuple[int, ...]]
    minima_set: set[int]
    selection: list[int]
    modified_order: LinearOrder | None
    applicable: bool
    witness_found: bool
    claim_holds: bool | None = None
    consistent_after: list[tuple[int, ...]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "consistent_set": [list(e) for e in self.consistent_set],
            "minima_set": sorted(self.minima_set),
            "selection": self.selection,
            "modified_order": list(self.modified_order.perm) if self.modified_order else None,
            "applicable": self.applicable,
            "witness_found": self.witness_found,
            "claim_holds": self.claim_holds,
        }


def thm2_witness_attempt(t: Tournament) -> Thm2Trace:
    """Try to turn the natural order into a witness by moving a transversal W to the front.

    C(T) are the edges consistent with the natural order and M their least
    vertices.  When every such edge has a vertex outside M, W takes the
    least such vertex from each edge; the new order lists W ascending, then
    the rest ascending.  No edge of C(T) can be consistent with it.
    """
    n = t.n
    edges = t.edges()
    consistent = [e for e, d in zip(edges, t.orientation) if d == 0]
    minima = {e[0] for e in consistent}
    applicable = all(any(v not in minima for v in e) for e in consistent)
    if not applicable:
        return Thm2Trace(consistent, minima, [], None, False, False)

    chosen: set[int] = set()
    selection: list[int] = []
    for e in consistent:
        v = min(v for v in e if v not in minima)
        if v not in chosen:
            chosen.add(v)
            selection.append(v)
    front = sorted(chosen)
    order = LinearOrder(tuple(front) + tuple(v for v in range(n) if v not in chosen))

    after = [e for e in edges if is_consistent(e, order)]
    claim = not any(is_consistent(e, order) for e in consistent)
    if not claim:
        raise InvariantViolation(f"an edge of C(T) stayed consistent after moving {front} to the front")
    if len(chosen) > len(consistent) or chosen & minima:
        raise InvariantViolation("W must avoid M and have at most |C(T)| elements")
    return Thm2Trace(consistent, minima, selection, order, True, not after, claim, after)


@dataclass
class Thm2Summary:
    trials: int
    applicable: int = 0
    claim_checked: int = 0
    claim_violations: int = 0
    witness_found: int = 0

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "applicable": self.applicable,
            "claim_checked": self.claim_checked,
            "claim_violations": self.claim_violations,
            "witness_found": self.witness_found,
        }


def thm2_experiment(cfg: SampleConfig) -> Thm2Summary:
    """Run the witness heuristic on ``cfg.trials`` sampled tournaments."""
    summary = Thm2Summary(cfg.trials)
    for i in range(cfg.trials):
        try:
            trace = thm2_witness_attempt(sample_tournament(cfg, i))
        except InvariantViolation:
            summary.applicable += 1
            summary.claim_checked += 1
            summary.claim_violations += 1
            continue
        if trace.applicable:
            summary.applicable += 1
            summary.claim_checked += 1
            summary.witness_found += trace.witness_found
    return summary
