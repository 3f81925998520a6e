"""The recursive family G_k of oriented k-graphs with Property O.

G_2 is the oriented 3-cycle.  G_{k+1} lives on three consecutive copies
X, Y, Z of G_k's vertex set and has four edge types::

    T1 = (x, y1..yk)   x in X, (y1..yk) an edge of the Y copy
    T2 = (z1..zk, x)   an edge of the Z copy, then x in X
    T3 = (y1..yk, z)   an edge of the Y copy, then z in Z
    T4 = (x1..xk, y)   an edge of the X copy, then y in Y
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .core import (
    Edge,
    InputError,
    InvariantViolation,
    LinearOrder,
    OrientedHypergraph,
    is_consistent,
)

MAX_EAGER_K = 5
TAGS = ("T1", "T2", "T3", "T4")
_CYCLE = ((0, 1), (1, 2), (2, 0))


def gk_vertex_count(k: int) -> int:
    return 3 ** (k - 1)


def gk_edge_count(k: int) -> int:
    """Closed form 2^(2(k-2)) * 3^(C(k-1,2)+1)."""
    return 2 ** (2 * (k - 2)) * 3 ** (math.comb(k - 1, 2) + 1)


@dataclass(frozen=True)
class GkLayout:
    """Block structure and edge provenance of an eagerly built G_k.

    ``provenance[i]`` is ``(tag, sub_edge, extra)``: the edge type, the index
    of the G_{k-1} edge it extends and the vertex it adds (global id).  For
    k = 2 the tag is ``"C3"`` and ``sub_edge``/``extra`` are -1.
    """

    k: int
    blocks: tuple[tuple[int, int], ...]
    provenance: tuple[tuple[str, int, int], ...]

    @property
    def n(self) -> int:
        return gk_vertex_count(self.k)

    def tag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for tag, _, _ in self.provenance:
            counts[tag] = counts.get(tag, 0) + 1
        return counts

    def block_tree(self) -> dict:
        return _block_tree(self.k, 0)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "m": len(self.provenance),
            "blocks": {name: list(r) for name, r in zip("XYZ", self.blocks)},
            "block_tree": self.block_tree(),
            "edge_types": [p[0] for p in self.provenance],
            "sub_edges": [p[1] for p in self.provenance],
            "extra_vertices": [p[2] for p in self.provenance],
        }


def _block_tree(k: int, offset: int) -> dict:
    size = gk_vertex_count(k)
    node = {"k": k, "range": [offset, offset + size]}
    if k > 2:
        s = size // 3
        node["X"] = _block_tree(k - 1, offset)
        node["Y"] = _block_tree(k - 1, offset + s)
        node["Z"] = _block_tree(k - 1, offset + 2 * s)
    return node


def _blocks(k: int) -> tuple[tuple[int, int], ...]:
    if k == 2:
        return ((0, 1), (1, 2), (2, 3))
    s = gk_vertex_count(k - 1)
    return ((0, s), (s, 2 * s), (2 * s, 3 * s))


@lru_cache(maxsize=None)
def _gk_edges(k: int) -> tuple[tuple[Edge, ...], tuple[tuple[str, int, int], ...]]:
    if k == 2:
        return _CYCLE, (("C3", -1, -1),) * 3
    sub, _ = _gk_edges(k - 1)
    s = gk_vertex_count(k - 1)
    X, Y, Z = range(0, s), range(s, 2 * s), range(2 * s, 3 * s)
    edges: list[Edge] = []
    prov: list[tuple[str, int, int]] = []
    for x in X:
        for i, e in enumerate(sub):
            edges.append((x,) + tuple(v + s for v in e))
            prov.append(("T1", i, x))
    for i, e in enumerate(sub):
        ez = tuple(v + 2 * s for v in e)
        for x in X:
            edges.append(ez + (x,))
            prov.append(("T2", i, x))
    for i, e in enumerate(sub):
        ey = tuple(v + s for v in e)
        for z in Z:
            edges.append(ey + (z,))
            prov.append(("T3", i, z))
    for i, e in enumerate(sub):
        for y in Y:
            edges.append(e + (y,))
            prov.append(("T4", i, y))
    return tuple(edges), tuple(prov)


def build_gk(k: int, *, max_eager_k: int = MAX_EAGER_K) -> tuple[OrientedHypergraph, GkLayout]:
    """Build G_k eagerly; use :func:`iter_gk_edge_blocks` beyond ``max_eager_k``."""
    if k < 2:
        raise InputError(f"G_k needs k >= 2, got {k}")
    if k > max_eager_k:
        raise InputError(
            f"G_{k} has {gk_edge_count(k)} edges; eager build is limited to k <= {max_eager_k}, "
            "stream with iter_gk_edge_blocks instead"
        )
    edges, prov = _gk_edges(k)
    h = OrientedHypergraph(gk_vertex_count(k), k, edges)
    return h, GkLayout(k, _blocks(k), prov)


def iter_gk_edge_blocks(k: int, *, chunk_rows: int = 1 << 18) -> Iterator[tuple[str, np.ndarray]]:
    """Stream the edges of G_k as ``(tag, int array of shape (r, k))`` blocks.

    Edge order matches :func:`build_gk`.  Memory stays bounded by the
    G_{k-1} stream plus one chunk, so any k is reachable given time.
    """
    if k < 2:
        raise InputError(f"G_k needs k >= 2, got {k}")
    if k == 2:
        yield "C3", np.array(_CYCLE, dtype=np.int64)
        return
    s = gk_vertex_count(k - 1)

    def sub_blocks():
        for _, block in iter_gk_edge_blocks(k - 1, chunk_rows=chunk_rows):
            yield block

    for x in range(s):
        for b in sub_blocks():
            col = np.full((len(b), 1), x, dtype=np.int64)
            yield "T1", np.hstack([col, b + s])
    extras = [("T2", 2 * s, np.arange(0, s)), ("T3", s, np.arange(2 * s, 3 * s)), ("T4", 0, np.arange(s, 2 * s))]
    for tag, shift, appended in extras:
        per = max(1, chunk_rows // s)
        for b in sub_blocks():
            for lo in range(0, len(b), per):
                part = b[lo:lo + per] + shift
                rows = np.repeat(part, s, axis=0)
                col = np.tile(appended, len(part)).reshape(-1, 1)
                yield tag, np.hstack([rows, col])


def find_consistent_edge_gk(layout: GkLayout | int, order: LinearOrder) -> Edge:
    """Return an edge of G_k consistent with ``order`` by replaying the case analysis.

    Works for any k without materializing the edge list; only the block
    recursion is needed.
    """
    k = layout.k if isinstance(layout, GkLayout) else int(layout)
    if k < 2:
        raise InputError(f"G_k needs k >= 2, got {k}")
    n = gk_vertex_count(k)
    if len(order) != n:
        raise InputError(f"order has {len(order)} vertices, G_{k} has {n}")
    rank = order.rank
    edge = _replay(k, 0, rank)
    if len(edge) != k or not is_consistent(edge, order):
        raise InvariantViolation(f"proof replay returned inconsistent edge {edge}")
    return edge


def _argmin(lo: int, hi: int, rank) -> int:
    return min(range(lo, hi), key=rank.__getitem__)


def _argmax(lo: int, hi: int, rank) -> int:
    return max(range(lo, hi), key=rank.__getitem__)


def _replay(k: int, off: int, rank) -> Edge:
    if k == 2:
        # the edge leaving the least vertex of the triangle is consistent
        v = _argmin(off, off + 3, rank) - off
        return tuple(off + u for u in _CYCLE[v])
    s = gk_vertex_count(k - 1)
    x_lo, y_lo, z_lo = off, off + s, off + 2 * s
    x_min = _argmin(x_lo, y_lo, rank)
    y_min = _argmin(y_lo, z_lo, rank)
    # (1) some x below all of Y
    if rank[x_min] < rank[y_min]:
        return (x_min,) + _replay(k - 1, y_lo, rank)
    x0 = _argmax(x_lo, y_lo, rank)
    z_max = _argmax(z_lo, z_lo + s, rank)
    # (2) some x above all of Z
    if rank[x0] > rank[z_max]:
        return _replay(k - 1, z_lo, rank) + (x0,)
    z_x0 = min((z for z in range(z_lo, z_lo + s) if rank[z] > rank[x0]), key=rank.__getitem__)
    y_max = _argmax(y_lo, z_lo, rank)
    # (3) all of Y below z_{x0}
    if rank[y_max] < rank[z_x0]:
        return _replay(k - 1, y_lo, rank) + (z_x0,)
    # (4) some y above z_{x0}, hence above all of X
    return _replay(k - 1, x_lo, rank) + (y_max,)


def classify_edge(k: int, edge: Edge) -> str:
    """Edge type of a G_k edge from its block pattern (k >= 3)."""
    s = gk_vertex_count(k - 1)
    blocks = [v // s for v in edge]
    head, tail = blocks[0], blocks[-1]
    if head == 0 and all(b == 1 for b in blocks[1:]):
        return "T1"
    if tail == 0 and all(b == 2 for b in blocks[:-1]):
        return "T2"
    if tail == 2 and all(b == 1 for b in blocks[:-1]):
        return "T3"
    if tail == 1 and all(b == 0 for b in blocks[:-1]):
        return "T4"
    raise InputError(f"{edge} is not an edge pattern of G_{k}")
