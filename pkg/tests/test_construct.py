import json
import math

import numpy as np
import pytest

from propo.construct import (
    build_gk,
    classify_edge,
    find_consistent_edge_gk,
    gk_edge_count,
    gk_vertex_count,
    iter_gk_edge_blocks,
)
from propo.core import InputError, LinearOrder, is_consistent
from propo.decide import has_property_o, naive_property_o


def test_g2_is_the_cycle():
    h, layout = build_gk(2)
    assert (h.n, h.m) == (3, 3)
    assert h.edges == ((0, 1), (1, 2), (2, 0))
    assert layout.blocks == ((0, 1), (1, 2), (2, 3))


def test_g3_sizes_and_blocks():
    h, layout = build_gk(3)
    assert (h.n, h.m) == (9, 36)
    assert layout.blocks == ((0, 3), (3, 6), (6, 9))


def test_g4_sizes():
    h, _ = build_gk(4)
    assert (h.n, h.m) == (27, 1296)
    assert 4 * 36 * 9 == 1296 == 2**4 * 3**4


@pytest.mark.parametrize("k", range(2, 6))
def test_closed_form_matches_build(k):
    h, layout = build_gk(k)
    assert h.n == gk_vertex_count(k) == 3 ** (k - 1)
    assert h.m == gk_edge_count(k) == 2 ** (2 * (k - 2)) * 3 ** (math.comb(k - 1, 2) + 1)
    assert len(h.underlying_sets()) == h.m
    if k >= 3:
        sub = gk_edge_count(k - 1) * gk_vertex_count(k - 1)
        assert layout.tag_counts() == {t: sub for t in ("T1", "T2", "T3", "T4")}
        for e, (tag, _, _) in zip(h.edges, layout.provenance):
            assert classify_edge(k, e) == tag


def test_provenance_points_at_sub_edges():
    h, layout = build_gk(4)
    sub, _ = build_gk(3)
    s = 9
    shift = {"T1": s, "T2": 2 * s, "T3": s, "T4": 0}
    for e, (tag, i, extra) in zip(h.edges, layout.provenance):
        base = e[1:] if tag == "T1" else e[:-1]
        assert tuple(v - shift[tag] for v in base) == sub.edges[i]
        assert extra == (e[0] if tag == "T1" else e[-1])


def test_streaming_matches_eager():
    for k in range(2, 6):
        rows = np.vstack([b for _, b in iter_gk_edge_blocks(k, chunk_rows=1000)])
        assert [tuple(r) for r in rows.tolist()] == list(build_gk(k)[0].edges)


def test_streaming_count_k6():
    counts = {}
    total = 0
    for tag, block in iter_gk_edge_blocks(6):
        counts[tag] = counts.get(tag, 0) + len(block)
        total += len(block)
    assert total == gk_edge_count(6) == 4 * gk_edge_count(5) * gk_vertex_count(5)
    assert set(counts.values()) == {gk_edge_count(5) * gk_vertex_count(5)}


def test_build_guards():
    with pytest.raises(InputError):
        build_gk(1)
    with pytest.raises(InputError):
        build_gk(6)


def test_exhaustive_small_cases():
    assert has_property_o(build_gk(2)[0])
    assert naive_property_o(build_gk(2)[0])
    assert has_property_o(build_gk(3)[0])


def test_finder_k2_example():
    assert find_consistent_edge_gk(2, LinearOrder((2, 0, 1))) == (2, 0)


def test_finder_all_orders_k2_and_sample_k3():
    import itertools

    for p in itertools.permutations(range(3)):
        o = LinearOrder(p)
        assert is_consistent(find_consistent_edge_gk(2, o), o)
    _, layout = build_gk(3)
    edges = set(build_gk(3)[0].edges)
    for p in itertools.islice(itertools.permutations(range(9)), 0, None, 97):
        o = LinearOrder(p)
        e = find_consistent_edge_gk(layout, o)
        assert e in edges and is_consistent(e, o)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_finder_returns_actual_edges(k):
    h, layout = build_gk(k)
    edges = set(h.edges)
    rng = np.random.default_rng(k)
    for _ in range(300):
        o = LinearOrder(tuple(rng.permutation(h.n).tolist()))
        e = find_consistent_edge_gk(layout, o)
        assert e in edges
        assert is_consistent(e, o)


def test_finder_natural_order():
    e = find_consistent_edge_gk(3, LinearOrder.natural(9))
    assert is_consistent(e, LinearOrder.natural(9))


def test_finder_beyond_eager_range():
    rng = np.random.default_rng(0)
    n = gk_vertex_count(7)
    for _ in range(20):
        o = LinearOrder(tuple(rng.permutation(n).tolist()))
        assert is_consistent(find_consistent_edge_gk(7, o), o)


def test_finder_length_mismatch():
    with pytest.raises(InputError):
        find_consistent_edge_gk(3, LinearOrder.natural(8))


def test_layout_json():
    _, layout = build_gk(3)
    data = json.loads(json.dumps(layout.to_json()))
    assert data["blocks"] == {"X": [0, 3], "Y": [3, 6], "Z": [6, 9]}
    assert data["edge_types"].count("T3") == 9
    assert data["block_tree"]["Z"]["range"] == [6, 9]
