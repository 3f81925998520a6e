"""Oriented k-uniform hypergraphs, linear orders, tournaments and the text format.

Vertices are dense integers ``0..n-1``.  An edge is a tuple of ``k`` distinct
vertices; its orientation is the tuple order.  At most one edge may live on a
given underlying ``k``-set.
"""

from __future__ import annotations

import enum
import graphlib
import io
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class InputError(ValueError):
    """Raised for malformed or out-of-contract input."""


class HypergraphParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvariantViolation(AssertionError):
    """A mathematical guarantee failed; this is a defect, not bad input."""


Edge = tuple[int, ...]


@dataclass(frozen=True)
class OrientedHypergraph:
    n: int
    k: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.k < 2:
            raise InputError(f"uniformity k must be >= 2, got {self.k}")
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        seen = set()
        for e in edges:
            _check_edge(e, self.n, self.k)
            key = frozenset(e)
            if key in seen:
                raise InputError(f"two edges on the same underlying set {sorted(key)}")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    def underlying_sets(self) -> set[frozenset[int]]:
        return {frozenset(e) for e in self.edges}

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def is_tournament(self) -> bool:
        return self.m == math.comb(self.n, self.k)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "OrientedHypergraph":
        return OrientedHypergraph(self.n, self.k, self.edges + tuple(tuple(e) for e in extra))


def _check_edge(e: Sequence[int], n: int, k: int) -> None:
    if len(e) != k:
        raise InputError(f"edge {tuple(e)} has arity {len(e)}, expected {k}")
    if len(set(e)) != len(e):
        raise InputError(f"edge {tuple(e)} repeats a vertex")
    for v in e:
        if not 0 <= v < n:
            raise InputError(f"vertex {v} out of range for n={n}")


@dataclass(frozen=True)
class LinearOrder:
    """``perm[i]`` is the i-th smallest vertex; ``rank`` is the inverse."""

    perm: tuple[int, ...]
    rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise InputError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
        rank = [0] * len(perm)
        for i, v in enumerate(perm):
            rank[v] = i
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "rank", tuple(rank))

    @classmethod
    def natural(cls, n: int) -> "LinearOrder":
        return cls(tuple(range(n)))

    @classmethod
    def from_ranks(cls, rank: Sequence[int]) -> "LinearOrder":
        perm = [0] * len(rank)
        for v, r in enumerate(rank):
            perm[r] = v
        return cls(tuple(perm))

    def __len__(self) -> int:
        return len(self.perm)


def is_consistent(edge: Sequence[int], order: LinearOrder) -> bool:
    """True iff the ranks of ``edge`` are strictly increasing under ``order``."""
    rank = order.rank
    n = len(rank)
    prev = -1
    for v in edge:
        if not 0 <= v < n:
            raise InputError(f"vertex {v} out of range for an order on {n} vertices")
        r = rank[v]
        if r <= prev:
            return False
        prev = r
    return True


def consistent_edges(h: OrientedHypergraph, order: LinearOrder) -> list[Edge]:
    return [e for e in h.edges if is_consistent(e, order)]


def consistent_order_count(n: int, k: int) -> int:
    """Number of linear orders of ``n`` vertices consistent with one fixed k-edge."""
    if k < 2 or k > n:
        raise InputError(f"need 2 <= k <= n, got n={n}, k={k}")
    return math.factorial(n) // math.factorial(k)


def edges_compatible(e1: Sequence[int], e2: Sequence[int]) -> bool:
    """True iff some linear order is consistent with both edges.

    The two chains are merged into one precedence relation; a common
    linear extension exists exactly when that relation is acyclic.
    """
    sorter = graphlib.TopologicalSorter()
    for chain in (e1, e2):
        if len(set(chain)) != len(chain):
            raise InputError(f"edge {tuple(chain)} repeats a vertex")
        for a, b in zip(chain, chain[1:]):
            sorter.add(b, a)
    try:
        sorter.prepare()
    except graphlib.CycleError:
        return False
    return True


def relabel(h: OrientedHypergraph, sigma: Sequence[int]) -> OrientedHypergraph:
    """Apply the vertex map ``v -> sigma[v]`` to every edge."""
    if sorted(sigma) != list(range(h.n)):
        raise InputError(f"sigma {tuple(sigma)} is not a permutation of 0..{h.n - 1}")
    return OrientedHypergraph(h.n, h.k, tuple(tuple(sigma[v] for v in e) for e in h.edges))


def relabel_order(order: LinearOrder, sigma: Sequence[int]) -> LinearOrder:
    return LinearOrder(tuple(sigma[v] for v in order.perm))


# --- tournaments -----------------------------------------------------------


@lru_cache(maxsize=None)
def colex_subsets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All k-subsets of range(n), sorted ascending, in colexicographic order."""
    return tuple(sorted(itertools.combinations(range(n), k), key=lambda s: s[::-1]))


@lru_cache(maxsize=None)
def lex_permutations(k: int) -> tuple[tuple[int, ...], ...]:
    """Permutations of range(k); position in the tuple is the lexicographic rank."""
    return tuple(itertools.permutations(range(k)))


@lru_cache(maxsize=None)
def _perm_index(k: int) -> dict[tuple[int, ...], int]:
    return {p: i for i, p in enumerate(lex_permutations(k))}


def perm_rank(p: Sequence[int]) -> int:
    return _perm_index(len(p))[tuple(p)]


def orient(subset: Sequence[int], rank: int) -> Edge:
    """The oriented tuple on a sorted ``subset`` selected by permutation ``rank``."""
    p = lex_permutations(len(subset))[rank]
    return tuple(subset[i] for i in p)


def orientation_rank(edge: Sequence[int]) -> int:
    """Inverse of :func:`orient`: rank of ``edge`` relative to its sorted vertex set."""
    pos = {v: i for i, v in enumerate(sorted(edge))}
    return perm_rank(tuple(pos[v] for v in edge))


@dataclass(frozen=True)
class Tournament:
    """One orientation index per k-subset, subsets in colex order."""

    n: int
    k: int
    orientation: tuple[int, ...]

    def __post_init__(self):
        orientation = tuple(int(x) for x in self.orientation)
        object.__setattr__(self, "orientation", orientation)
        if not 2 <= self.k <= self.n:
            raise InputError(f"need 2 <= k <= n, got n={self.n}, k={self.k}")
        expected = math.comb(self.n, self.k)
        if len(orientation) != expected:
            raise InputError(f"tournament needs {expected} orientations, got {len(orientation)}")
        radix = math.factorial(self.k)
        for x in orientation:
            if not 0 <= x < radix:
                raise InputError(f"orientation index {x} outside 0..{radix - 1}")

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return colex_subsets(self.n, self.k)

    def edges(self) -> tuple[Edge, ...]:
        return tuple(orient(s, r) for s, r in zip(self.subsets, self.orientation))

    def to_hypergraph(self) -> OrientedHypergraph:
        return OrientedHypergraph(self.n, self.k, self.edges())

    @classmethod
    def from_hypergraph(cls, h: OrientedHypergraph) -> "Tournament":
        by_set = {tuple(sorted(e)): e for e in h.edges}
        subsets = colex_subsets(h.n, h.k)
        if len(by_set) != len(subsets):
            raise InputError(f"not a tournament: {len(by_set)} edges, need {len(subsets)}")
        return cls(h.n, h.k, tuple(orientation_rank(by_set[s]) for s in subsets))

    @classmethod
    def from_index(cls, n: int, k: int, index: int) -> "Tournament":
        """Decode a mixed-radix index; digit j (base k!) belongs to colex subset j."""
        radix = math.factorial(k)
        digits = []
        for _ in range(math.comb(n, k)):
            index, d = divmod(index, radix)
            digits.append(d)
        if index:
            raise InputError("tournament index out of range")
        return cls(n, k, tuple(digits))

    def index(self) -> int:
        radix = math.factorial(self.k)
        out = 0
        for d in reversed(self.orientation):
            out = out * radix + d
        return out


# --- certificates ------------------------------------------------------------


class Status(str, enum.Enum):
    HAS_O = "HAS_O"
    FAILS_O = "FAILS_O"
    INDETERMINATE = "INDETERMINATE"


@dataclass
class WitnessCertificate:
    status: Status
    witness_order: LinearOrder | None
    method: str
    nodes_expanded: int = 0
    orders_examined: int = 0

    def __post_init__(self):
        if (self.status is Status.FAILS_O) != (self.witness_order is not None):
            raise InvariantViolation("witness order present iff status is FAILS_O")

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "witness_order": list(self.witness_order.perm) if self.witness_order else None,
            "method": self.method,
            "nodes_expanded": self.nodes_expanded,
            "orders_examined": self.orders_examined,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WitnessCertificate":
        try:
            order = data.get("witness_order")
            return cls(
                status=Status(data["status"]),
                witness_order=LinearOrder(tuple(order)) if order is not None else None,
                method=str(data.get("method", "unknown")),
                nodes_expanded=int(data.get("nodes_expanded", 0)),
                orders_examined=int(data.get("orders_examined", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc


def verify_witness(h: OrientedHypergraph, order: LinearOrder) -> bool:
    """Re-check a claimed witness using only the consistency predicate."""
    if len(order) != h.n:
        return False
    return not any(is_consistent(e, order) for e in h.edges)


# --- text format -------------------------------------------------------------


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse(text: str | bytes) -> tuple[OrientedHypergraph, bool]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = _data_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise HypergraphParseError("empty input: missing header", 1) from None
    tokens = header.split()
    is_tournament = len(tokens) == 4 and tokens[3] == "T"
    if len(tokens) != 3 and not is_tournament:
        raise HypergraphParseError(f"header must be 'k n m' or 'k n m T', got {header!r}", lineno)
    try:
        k, n, m = (int(t) for t in tokens[:3])
    except ValueError:
        raise HypergraphParseError(f"non-integer header {header!r}", lineno) from None
    if k < 2 or n < 0 or m < 0:
        raise HypergraphParseError(f"invalid header values k={k} n={n} m={m}", lineno)
    if is_tournament and m != math.comb(n, k):
        raise HypergraphParseError(f"tournament header needs m = C({n},{k}) = {math.comb(n, k)}", lineno)

    edges: list[Edge] = []
    seen: dict[frozenset[int], int] = {}
    for lineno, line in lines:
        if len(edges) == m:
            raise HypergraphParseError(f"more than m={m} edge lines", lineno)
        try:
            e = tuple(int(t) for t in line.split())
        except ValueError:
            raise HypergraphParseError(f"non-integer vertex id in {line!r}", lineno) from None
        try:
            _check_edge(e, n, k)
        except InputError as exc:
            raise HypergraphParseError(str(exc), lineno) from None
        key = frozenset(e)
        if key in seen:
            raise HypergraphParseError(
                f"duplicate underlying set {sorted(key)} (first on line {seen[key]})", lineno
            )
        seen[key] = lineno
        edges.append(e)
    if len(edges) != m:
        raise HypergraphParseError(f"expected {m} edges, found {len(edges)}")
    return OrientedHypergraph(n, k, tuple(edges)), is_tournament


def parse_hypergraph(text: str | bytes) -> OrientedHypergraph:
    return _parse(text)[0]


def parse_tournament(text: str | bytes) -> Tournament:
    h, _ = _parse(text)
    return Tournament.from_hypergraph(h)


def serialize_hypergraph(h: OrientedHypergraph, *, tournament: bool = False) -> bytes:
    buf = io.StringIO()
    header = f"{h.k} {h.n} {h.m}"
    if tournament:
        if not h.is_tournament():
            raise InputError("hypergraph is not a tournament")
        header += " T"
    buf.write(header + "\n")
    for e in h.edges:
        buf.write(" ".join(map(str, e)) + "\n")
    return buf.getvalue().encode("utf-8")


def serialize_tournament(t: Tournament) -> bytes:
    return serialize_hypergraph(t.to_hypergraph(), tournament=True)


def load_hypergraph(path) -> OrientedHypergraph:
    with open(path, "rb") as fh:
        return parse_hypergraph(fh.read())


def cycle3() -> OrientedHypergraph:
    """The oriented 3-cycle 0 -> 1 -> 2 -> 0."""
    return OrientedHypergraph(3, 2, ((0, 1), (1, 2), (2, 0)))
