import itertools

import pytest

from propo.core import LinearOrder, OrientedHypergraph, cycle3


@pytest.fixture
def c3():
    return cycle3()


@pytest.fixture
def transitive3():
    return OrientedHypergraph(3, 2, ((0, 1), (0, 2), (1, 2)))


def all_orders(n):
    return [LinearOrder(p) for p in itertools.permutations(range(n))]


def brute_force_property_o(h):
    """Reference decision written against the definition only."""
    for perm in itertools.permutations(range(h.n)):
        pos = {v: i for i, v in enumerate(perm)}
        if not any(all(pos[e[i]] < pos[e[i + 1]] for i in range(h.k - 1)) for e in h.edges):
            return False
    return True


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_report = rep
