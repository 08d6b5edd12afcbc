import itertools

import pytest

from locmech.coloring import ColorAssignment, color_line_graph
from locmech.mwvc import (mwvc_allocate, mwvc_mechanism, mwvc_prices, mwvc_sequential,
                          mwvc_verify_ratio)
from locmech.myerson import run_mechanism
from locmech.oracle import check_monotone, random_graphs, small_corpus

from conftest import graph, path


def test_single_edge():
    g = path([5, 3])
    cover, charges, t, _ = mwvc_allocate(g, (5, 3), ColorAssignment((0,), 1))
    assert cover == {1} and charges == {0: 3} and t == [2, 0]
    assert mwvc_verify_ratio(g, (5, 3), cover, charges) == (3, 1)


def test_path_worst_case():
    g = path([1, 1, 1])
    cover, _, t, _ = mwvc_allocate(g, (1, 1, 1), ColorAssignment((0, 1), 2))
    assert t == [0, 0, 1] and cover == {0, 1}
    assert mwvc_verify_ratio(g, (1, 1, 1), cover) == (1, 2)


def test_zero_weight_node_joins_at_once():
    g = path([0, 4, 4])
    cover, _, _, _ = mwvc_allocate(g, (0, 4, 4), ColorAssignment((1, 0), 2))
    assert 0 in cover


def test_prices():
    assert mwvc_prices(path([5, 3]), (5, 3)) == {1: 5}
    # the middle node's edges charge it at most 1 each, so it joins iff bid <= 2
    assert mwvc_prices(path([1, 1, 1], W=2), (1, 1, 1))[1] == 2
    assert mwvc_prices(path([1, 1, 1], W=4), (1, 1, 1))[1] == 2
    assert mwvc_sequential(path([1, 3, 1]), (1, 3, 1), [0, 1])[0] == {0, 2}


def test_isolated_node_never_covered():
    g = graph(3, [(0, 1)], [2, 2, 0], 2)
    res = run_mechanism(mwvc_mechanism(), g, (2, 2, 0))
    assert res.allocation[2] is False and res.payments[2] == 0


@pytest.mark.parametrize("g", [g for g in random_graphs(40, seed=2) if g.edges],
                         ids=lambda g: f"n{g.node_count}")
def test_cover_charges_and_ratio(g):
    col = color_line_graph(g)[0]
    cover, charges, t, _ = mwvc_allocate(g, g.weights, col)
    assert all(u in cover or v in cover for u, v in g.edges)
    for v in range(g.node_count):
        spent = sum(charges[i] for i, e in enumerate(g.edges) if v in e)
        assert t[v] == g.weights[v] - spent and t[v] >= 0
    mwvc_verify_ratio(g, g.weights, cover, charges)


@pytest.mark.parametrize("g", [g for g in random_graphs(15, seed=4) if g.edges],
                         ids=lambda g: f"n{g.node_count}")
def test_order_within_class_is_irrelevant(g):
    col = color_line_graph(g)[0]
    classes = sorted(set(col.colors))
    by_class = [[i for i in range(len(g.edges)) if col[i] == c] for c in classes]
    cover, charges, t, _ = mwvc_allocate(g, g.weights, col)
    for perm in itertools.islice(itertools.product(*[itertools.permutations(b)
                                                     for b in by_class]), 12):
        order = [i for block in perm for i in block]
        assert mwvc_sequential(g, g.weights, order) == (cover, charges, t)


@pytest.mark.parametrize("g", random_graphs(15, seed=6), ids=lambda g: f"n{g.node_count}")
def test_rounds_do_not_depend_on_weights(g):
    mech = mwvc_mechanism()
    rounds = {mech.allocate(g.with_weights([w] * g.node_count, 9), [w] * g.node_count)[1].rounds
              for w in range(10)}
    rounds.add(mech.allocate(g, g.weights)[1].rounds)
    assert len(rounds) == 1


def test_monotone_exhaustive_tiny():
    assert check_monotone(mwvc_mechanism(), small_corpus(max_n=3)) == []
