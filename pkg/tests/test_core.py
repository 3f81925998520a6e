import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from propo.construct import build_gk
from propo.core import (
    HypergraphParseError,
    InputError,
    LinearOrder,
    OrientedHypergraph,
    Tournament,
    colex_subsets,
    consistent_order_count,
    edges_compatible,
    is_consistent,
    orient,
    orientation_rank,
    parse_hypergraph,
    parse_tournament,
    relabel,
    relabel_order,
    serialize_hypergraph,
    serialize_tournament,
)
from propo.decide import has_property_o

from .conftest import all_orders


def test_is_consistent_examples():
    assert is_consistent((0, 1, 2), LinearOrder.natural(3))
    assert not is_consistent((1, 0), LinearOrder.natural(2))
    assert is_consistent((2, 0, 1), LinearOrder((2, 0, 1)))


def test_is_consistent_rejects_out_of_range():
    with pytest.raises(InputError):
        is_consistent((0, 3), LinearOrder.natural(3))


def test_consistent_order_count_examples():
    assert consistent_order_count(4, 2) == 12
    for k in range(2, 7):
        assert consistent_order_count(k, k) == 1
    brute = sum(is_consistent((0, 1, 2), o) for o in all_orders(5))
    assert brute == consistent_order_count(5, 3) == 20


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 7) for k in range(2, n + 1)])
def test_consistent_order_count_matches_enumeration(n, k):
    orders = all_orders(n)
    for edge in [tuple(range(k)), tuple(reversed(range(n - k, n)))]:
        assert sum(is_consistent(edge, o) for o in orders) == consistent_order_count(n, k)


@pytest.mark.parametrize("n,k", [(3, 4), (5, 1)])
def test_consistent_order_count_errors(n, k):
    with pytest.raises(InputError):
        consistent_order_count(n, k)


def test_edges_compatible_examples():
    assert edges_compatible((0, 1, 2), (3, 4, 5))
    assert edges_compatible((0, 1, 2), (1, 2, 3))
    assert not edges_compatible((0, 1, 2), (2, 1, 3))


def brute_compatible(e1, e2, n):
    return any(is_consistent(e1, o) and is_consistent(e2, o) for o in all_orders(n))


def test_edges_compatible_against_brute_force():
    edges = [orient(s, p) for s in colex_subsets(4, 3) for p in range(6)]
    for e1, e2 in itertools.product(edges, repeat=2):
        assert edges_compatible(e1, e2) == brute_compatible(e1, e2, 4)
        assert edges_compatible(e1, e2) == edges_compatible(e2, e1)
    for e in edges:
        assert edges_compatible(e, e)


def test_hypergraph_rejects_duplicate_set():
    with pytest.raises(InputError):
        OrientedHypergraph(3, 2, ((0, 1), (1, 0)))


@pytest.mark.parametrize("edges", [((0, 1, 2),), ((0, 0),), ((0, 5),)])
def test_hypergraph_rejects_bad_edges(edges):
    with pytest.raises(InputError):
        OrientedHypergraph(3, 2, edges)


def test_linear_order_rank_is_inverse():
    o = LinearOrder((2, 0, 1))
    assert o.rank == (1, 2, 0)
    assert LinearOrder.from_ranks(o.rank) == o
    with pytest.raises(InputError):
        LinearOrder((0, 0, 1))


def test_relabel_examples(c3):
    assert relabel(c3, (0, 1, 2)) == c3
    assert relabel(c3, (1, 0, 2)).edges == ((1, 0), (0, 2), (2, 1))
    with pytest.raises(InputError):
        relabel(c3, (0, 0, 1))


def test_relabel_preserves_property_o():
    h = OrientedHypergraph(4, 2, ((0, 1), (1, 2), (2, 0), (3, 0)))
    for sigma in itertools.permutations(range(4)):
        assert has_property_o(relabel(h, sigma)) == has_property_o(h)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_consistency_is_relabel_invariant(data):
    n = data.draw(st.integers(2, 7))
    k = data.draw(st.integers(2, n))
    edge = tuple(data.draw(st.permutations(range(n)))[:k])
    order = LinearOrder(tuple(data.draw(st.permutations(range(n)))))
    sigma = data.draw(st.permutations(range(n)))
    moved = tuple(sigma[v] for v in edge)
    assert is_consistent(moved, relabel_order(order, sigma)) == is_consistent(edge, order)


def test_parse_cycle():
    h = parse_hypergraph("2 3 3\n0 1\n1 2\n2 0\n")
    assert h == OrientedHypergraph(3, 2, ((0, 1), (1, 2), (2, 0)))


def test_parse_duplicate_set_reports_line():
    with pytest.raises(HypergraphParseError) as err:
        parse_hypergraph("3 5 2\n0 1 2\n2 1 0\n")
    assert err.value.line == 3


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2 3\n",
        "x 3 1\n0 1\n",
        "2 3 1\n0 1 2\n",
        "2 3 1\n0 7\n",
        "2 3 2\n0 1\n",
        "2 3 1\n0 1\n1 2\n",
        "2 3 1\n0 a\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(HypergraphParseError):
        parse_hypergraph(text)


def test_parse_comments_and_whitespace():
    h = parse_hypergraph("# cycle\n2 3 3   \n0 1\n# mid\n1 2  \n\n2 0\n")
    assert h.m == 3


def test_round_trip_gk3():
    h, _ = build_gk(3)
    assert parse_hypergraph(serialize_hypergraph(h)) == h


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_round_trip_random(data):
    n = data.draw(st.integers(2, 7))
    k = data.draw(st.integers(2, n))
    subsets = colex_subsets(n, k)
    chosen = data.draw(st.lists(st.sampled_from(range(len(subsets))), unique=True, max_size=len(subsets)))
    edges = tuple(orient(subsets[i], data.draw(st.integers(0, math.factorial(k) - 1))) for i in chosen)
    h = OrientedHypergraph(n, k, edges)
    assert parse_hypergraph(serialize_hypergraph(h)) == h


def test_colex_order():
    assert colex_subsets(4, 2) == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))


def test_orientation_rank_round_trip():
    for s in colex_subsets(5, 3):
        for r in range(6):
            assert orientation_rank(orient(s, r)) == r
    assert orient((1, 4, 6), 0) == (1, 4, 6)
    assert orient((1, 4, 6), 5) == (6, 4, 1)


def test_tournament_index_round_trip():
    for idx in range(6**4):
        t = Tournament.from_index(4, 3, idx)
        assert t.index() == idx
        assert Tournament.from_hypergraph(t.to_hypergraph()) == t


def test_tournament_file_round_trip():
    t = Tournament.from_index(5, 3, 123456)
    text = serialize_tournament(t)
    assert text.splitlines()[0] == b"3 5 10 T"
    assert parse_tournament(text) == t


def test_tournament_header_requires_full_count():
    with pytest.raises(HypergraphParseError):
        parse_hypergraph("2 3 2 T\n0 1\n1 2\n")


def test_tournament_validation():
    with pytest.raises(InputError):
        Tournament(3, 2, (0, 1))
    with pytest.raises(InputError):
        Tournament(3, 2, (0, 1, 2))
