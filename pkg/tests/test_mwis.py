import random

import pytest

from locmech.coloring import ColorAssignment, color_graph
from locmech.graph import TieKey, beats
from locmech.mwis import mwis_allocate, mwis_mechanism, mwis_prices_congest, mwis_verify_ratio
from locmech.myerson import critical_price, run_mechanism
from locmech.oracle import BoundViolation, random_graphs, small_corpus
from locmech.sim import assert_congest, congest

from conftest import graph, path, star

PHI2 = ColorAssignment((0, 1), 2)


def test_single_local_max_wins():
    g = path([1, 5, 1])
    members, _ = mwis_allocate(g, (1, 5, 1), color_graph(g)[0])
    assert members == {1}


def test_both_ends_win():
    g = path([4, 1, 4])
    members, _ = mwis_allocate(g, (4, 1, 4), color_graph(g)[0])
    assert members == {0, 2}


def test_tie_goes_to_smaller_color():
    g = path([2, 2])
    assert mwis_allocate(g, (2, 2), PHI2)[0] == {0}
    assert mwis_allocate(g, (2, 2), ColorAssignment((1, 0), 2))[0] == {1}


def test_price_examples():
    g = path([5, 3])
    assert mwis_prices_congest(graph(1, [], [4], 4), (4,), ColorAssignment((0,), 1), {0})[0] == {0: 0}
    assert mwis_prices_congest(g, (5, 3), PHI2, {0})[0] == {0: 3}
    assert mwis_prices_congest(g, (5, 3), ColorAssignment((1, 0), 2), {0})[0] == {0: 4}


def test_ratio_examples():
    g = path([1, 5, 1])
    assert mwis_verify_ratio(g, (1, 5, 1), {1}) == (5, 1)
    s = star(2, [1, 1, 1])
    members = mwis_allocate(s, s.weights, color_graph(s)[0])[0]
    assert members == {0}
    opt, ratio = mwis_verify_ratio(s, s.weights, members)
    assert opt == 3 and ratio == 1.5
    assert mwis_verify_ratio(graph(1, [], [3], 3), (3,), {0})[1] == 1
    with pytest.raises(BoundViolation):
        mwis_verify_ratio(path([1, 5, 1]), (1, 5, 1), {0})


def test_path_mechanism_payment():
    res = run_mechanism(mwis_mechanism(), path([1, 5, 1]), (1, 5, 1))
    assert res.allocation == [False, True, False]
    assert res.payments == [0, -2, 0]


def _independent_and_maximal(g, members):
    for u, v in g.edges:
        assert not (u in members and v in members)
    for v in range(g.node_count):
        if v not in members:
            assert any(u in members for u in g.adjacency[v])


@pytest.mark.parametrize("g", random_graphs(40, seed=5), ids=lambda g: f"n{g.node_count}")
def test_independent_maximal_and_congest(g):
    model = congest(8)
    col = color_graph(g, model)[0]
    members, trace = mwis_allocate(g, g.weights, col, model)
    _independent_and_maximal(g, members)
    assert assert_congest(trace, g.node_count, 8) is None
    mech = mwis_mechanism(prices="local")
    prices, ptrace = mwis_prices_congest(g, g.weights, col, members, model)
    assert assert_congest(ptrace, g.node_count, 8) is None
    for v in members:
        assert prices[v] == critical_price(mech, g, g.weights, v)


def _reachable(g, bids, col, v):
    """Nodes reachable from v along edges towards tie-order-larger endpoints."""
    key = lambda x: TieKey(bids[x], col[x])
    seen, stack = {v}, [v]
    while stack:
        x = stack.pop()
        for u in g.adjacency[x]:
            if u not in seen and beats(key(u), key(x)):
                seen.add(u)
                stack.append(u)
    return seen


@pytest.mark.parametrize("g", random_graphs(25, seed=9), ids=lambda g: f"n{g.node_count}")
def test_output_depends_only_on_reachable_nodes(g):
    rng = random.Random(g.node_count)
    col = color_graph(g)[0]
    base = mwis_allocate(g, g.weights, col)[0]
    for v in range(g.node_count):
        reach = _reachable(g, g.weights, col, v)
        bids = list(g.weights)
        for u in range(g.node_count):
            if u not in reach and all(w not in reach for w in g.adjacency[u]):
                bids[u] = rng.randint(0, g.weight_bound)
        assert (v in mwis_allocate(g, bids, col)[0]) == (v in base)


def test_monotone_exhaustive_tiny():
    from locmech.oracle import check_monotone
    assert check_monotone(mwis_mechanism(), small_corpus(max_n=3)) == []
