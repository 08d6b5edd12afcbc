from fractions import Fraction

import pytest

from locmech.graph import Objective
from locmech.myerson import (DiscretizationConfig, MechanismSpec, MonotonicityError,
                             critical_price, critical_price_scan, discretize,
                             payments_from_prices, run_discretized, run_mechanism,
                             total_utility)
from locmech.mwds import mwds_mechanism
from locmech.mwis import mwis_mechanism
from locmech.mwvc import mwvc_mechanism
from locmech.oracle import small_corpus
from locmech.sim import RoundTrace

from conftest import graph, path


def middle_band():
    """Selected only at bid 1 or 2: not monotone."""
    return MechanismSpec(
        "band", Objective.MAX,
        allocate=lambda g, bids, model=None: ([1 <= b <= 2 for b in bids], RoundTrace()),
        selected=bool, utility=lambda label, w: w if label else 0)


def test_isolated_node_price_zero():
    g = graph(1, [], [2], 3)
    assert critical_price(mwis_mechanism(prices="local"), g, (2,), 0) == 0


def test_edge_prices(edge53):
    assert critical_price(mwis_mechanism(prices="local"), edge53, (5, 3), 0) == 3
    assert critical_price(mwvc_mechanism(), edge53, (5, 3), 1) == 5


def test_non_monotone_rule_is_reported():
    g = graph(1, [], [1], 3)
    with pytest.raises(MonotonicityError) as info:
        critical_price_scan(middle_band(), g, (1,), 0)
    assert info.value.node == 0
    with pytest.raises(MonotonicityError):
        critical_price(middle_band(), g, (1,), 0)


def test_payments_from_prices():
    assert payments_from_prices(Objective.MAX, [True], {0: 3}) == [-3]
    assert payments_from_prices(Objective.MIN, [True], {0: 5}) == [5]
    assert payments_from_prices(Objective.MAX, [False], {}) == [0]
    with pytest.raises(RuntimeError):
        payments_from_prices(Objective.MIN, [True], {})


def test_total_utility():
    assert total_utility(mwis_mechanism(), True, 5, -3) == 2
    assert total_utility(mwvc_mechanism(), True, 3, 5) == 2
    assert total_utility(mwds_mechanism(), False, 4, 0) == 0


def test_discretize():
    cfg = DiscretizationConfig(Fraction(1, 2), 2)
    assert discretize([Fraction(13, 10)], cfg, Objective.MAX) == (2,)
    assert discretize([Fraction(13, 10)], cfg, Objective.MIN) == (3,)
    assert discretize([Fraction(3, 2)], cfg, Objective.MAX) == (3,)
    assert discretize([Fraction(3, 2)], cfg, Objective.MIN) == (3,)
    with pytest.raises(ValueError):
        discretize([Fraction(5, 2)], cfg, Objective.MAX)
    with pytest.raises(ValueError):
        DiscretizationConfig(Fraction(2, 3), 1)


def test_run_mechanism_examples(edge53):
    res = run_mechanism(mwis_mechanism(), graph(1, [], [7], 7), (7,))
    assert res.allocation == [True] and res.payments == [0] and res.objective_value == 7
    assert run_mechanism(mwis_mechanism(), path([1, 5, 1]), (1, 5, 1)).allocation == [
        False, True, False]
    res = run_mechanism(mwvc_mechanism(), edge53, (5, 3))
    assert res.allocation == [False, True] and res.objective_value == -3


def test_result_json(edge53):
    data = run_mechanism(mwvc_mechanism(), edge53, (5, 3)).to_json()
    assert set(data) == {"mechanism", "allocation", "payments", "objective_value",
                         "rounds", "messages_total", "max_message_bits"}
    assert data["allocation"] == [0, 1] and data["payments"] == [0, 5]


def test_discretized_run_reports_real_units():
    g = path([0, 0, 0], W=2)
    cfg = DiscretizationConfig(Fraction(1, 2), 2)
    res = run_discretized(mwis_mechanism(), g, [Fraction(1, 3), Fraction(7, 4), 1], cfg)
    assert res.allocation == [False, True, False]
    assert res.payments[1] == -Fraction(1)
    assert res.objective_value == Fraction(7, 4)


@pytest.mark.parametrize("mech", [mwis_mechanism(prices="local"), mwvc_mechanism(),
                                  mwds_mechanism()], ids=lambda m: m.name)
def test_binary_search_matches_scan(mech):
    corpus = small_corpus(max_n=3)
    m = mech.cached()
    for g in corpus.instances:
        for bids in corpus.bid_vectors(g):
            labels, _ = m.allocate(g, bids)
            for v in range(g.node_count):
                assert critical_price(m, g, bids, v) == critical_price_scan(m, g, bids, v)


@pytest.mark.parametrize("mech", [mwis_mechanism(), mwvc_mechanism(), mwds_mechanism()],
                         ids=lambda m: m.name)
def test_individual_rationality(mech):
    corpus = small_corpus(max_n=3)
    for g in corpus.instances:
        for bids in corpus.bid_vectors(g):
            res = run_mechanism(mech, g, bids)
            for v in range(g.node_count):
                assert total_utility(mech, res.allocation[v], bids[v], res.payments[v]) >= 0
