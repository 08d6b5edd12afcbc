import itertools
from fractions import Fraction

import pytest

from locmech.graph import (ColorClashError, GraphFormatError, Objective, Ordering,
                           TieKey, WeightedGraph, beats, check_bids, format_graph,
                           line_graph, parse_graph, parse_graph_raw, parse_rates,
                           square_graph, tie_compare, validate_graph)
from locmech.oracle import random_graphs

from conftest import cycle, graph, path, star, triangle


def test_single_node_is_valid():
    assert validate_graph(graph(1, [], [3], 3)) is None


def test_self_loop_reported():
    g = graph(2, [(0, 1)], [0, 0], 1)
    assert "self-loop" in validate_graph(g, [(0, 1), (1, 1)])
    with pytest.raises(ValueError, match="self-loop"):
        graph(2, [(1, 1)], [0, 0], 1)


def test_weight_out_of_range():
    with pytest.raises(ValueError, match="weight out of range"):
        graph(1, [], [5], 4)


def test_duplicate_edge_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        graph(2, [(0, 1), (1, 0)], [0, 0], 0)


def test_max_degree_is_cached_truth():
    g = star(1, [1, 1, 1])
    assert g.max_degree == 3
    assert [g.degree(v) for v in range(4)] == [3, 1, 1, 1]


def test_bids_checked_against_grid():
    g = path([1, 2])
    assert check_bids(g, [2, 0]) == (2, 0)
    with pytest.raises(ValueError):
        check_bids(g, [3, 0])
    with pytest.raises(ValueError):
        check_bids(g, [1])


def test_square_of_path_is_triangle():
    assert square_graph(path([0, 0, 0])).edges == ((0, 1), (0, 2), (1, 2))


def test_square_of_edge_is_edge():
    assert square_graph(path([0, 0])).edges == ((0, 1),)


def test_square_of_four_cycle_is_complete():
    assert square_graph(cycle([0] * 4)).edges == tuple(itertools.combinations(range(4), 2))


def test_line_graph_examples():
    assert line_graph(path([0, 0, 0])).edges == ((0, 1),)
    assert line_graph(triangle([0, 0, 0])).edges == ((0, 1), (0, 2), (1, 2))
    assert line_graph(star(0, [0, 0, 0])).edges == ((0, 1), (0, 2), (1, 2))


def test_line_graph_of_edgeless_graph_is_rejected():
    with pytest.raises(ValueError):
        line_graph(graph(2, [], [0, 0]))


@pytest.mark.parametrize("g", random_graphs(30, seed=3), ids=lambda g: f"n{g.node_count}")
def test_derived_graphs_are_valid(g):
    assert validate_graph(square_graph(g)) is None
    if g.edges:
        lg = line_graph(g)
        assert validate_graph(lg) is None
        for i, (u, v) in enumerate(g.edges):
            assert lg.degree(i) == g.degree(u) + g.degree(v) - 2


def test_tie_examples():
    assert beats(TieKey(5, 2), TieKey(5, 4))
    assert beats(TieKey(6, 0), TieKey(5, 9))
    assert beats(TieKey(3, 0), TieKey(3, 1), Objective.MIN)
    assert tie_compare(TieKey(3, 1), TieKey(3, 0), Objective.MIN) == Ordering.LESS


def test_equal_colors_are_a_contract_violation():
    with pytest.raises(ColorClashError):
        beats(TieKey(1, 3), TieKey(2, 3))


@pytest.mark.parametrize("objective", list(Objective))
def test_tie_order_is_strict_total(objective):
    keys = [TieKey(v, c) for v in range(3) for c in range(3)]
    for a, b in itertools.permutations(keys, 2):
        if a.color != b.color:
            assert beats(a, b, objective) != beats(b, a, objective)
    for a, b, c in itertools.permutations(keys, 3):
        if len({a.color, b.color, c.color}) == 3:
            if beats(a, b, objective) and beats(b, c, objective):
                assert beats(a, c, objective)


def test_file_round_trip():
    g = star(1, [10, 10, 10, 10], W=10)
    assert parse_graph(format_graph(g)) == g


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("2 1\n", 1),
    ("2 1 5\n0 1\n", 3),
    ("2 1 5\n0 1\n1 6\n0 1\n", 3),
    ("2 1 5\n1 1\n0 1\n0 1\n", 2),
    ("2 1 5\n0 1\n1 1\n1 0\n", 4),
    ("2 1 5\n0 1\n1 1\n0 2\n", 4),
    ("3 2 5\n0 1\n1 1\n2 1\n0 1\n0 1\n", 6),
    ("2 1 5\n0 1\n1 1\n0 1\nextra\n", 5),
    ("2 0 5\n0 x\n1 1\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.lineno == line
    assert f"line {line}" in str(info.value)


def test_rational_weights_only_on_request():
    text = "2 1 2\n0 1/2\n1 1.25\n0 1\n"
    with pytest.raises(GraphFormatError):
        parse_graph(text)
    _, _, weights, _ = parse_graph_raw(text, allow_rational=True)
    assert weights == [Fraction(1, 2), Fraction(5, 4)]


def test_rates_file():
    assert parse_rates("10\n4\n") == (10, 4)
    assert parse_rates("1/2\n1/3\n0\n") == (Fraction(1, 2), Fraction(1, 3), 0)
    for bad in ("", "1\n2\n", "-1\n", "x\n", "1\n\n"):
        with pytest.raises(GraphFormatError):
            parse_rates(bad)


def test_with_weights_keeps_structure():
    g = path([1, 2, 3])
    h = g.with_weights([0, 0, 7], 7)
    assert h.structure == g.structure and h.weight_bound == 7
    assert isinstance(h, WeightedGraph)
