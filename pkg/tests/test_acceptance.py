"""Acceptance criteria 1 to 9, each at its stated tolerance (exact, zero).

Every test records one pass/fail line, printed at the end of the session.
"""

from collections import Counter

import pytest

from locmech.oracle import check_monotone, check_truthful, default_corpus, small_corpus
from locmech.verify import (BINARY_MECHANISMS, CONGEST_CONSTANT, EPSILONS, MECHANISMS,
                            RATE_SCHEDULES, ROUND_BOUNDS, make_mechanism, suite_approx,
                            suite_discretized, suite_equivalence, suite_prices,
                            suite_rounds)

import mutants
from conftest import ACCEPTANCE


def record(k, ok, text):
    ACCEPTANCE[k] = (ok, text)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")


@pytest.fixture(scope="module")
def sweep():
    return small_corpus(max_n=4, W=3)


@pytest.fixture(scope="module")
def corpus():
    return default_corpus(W=3, random_count=100, seed=0)


@pytest.fixture(scope="module")
def prices_result(corpus):
    return suite_prices(corpus, c=CONGEST_CONSTANT)


def _variants():
    for name in MECHANISMS:
        if name == "slot":
            for rates in RATE_SCHEDULES:
                yield f"slot{[str(r) for r in rates]}", make_mechanism(name, rates)
        else:
            yield name, make_mechanism(name)


def test_1_truthfulness_sweep(sweep):
    counts = {label: len(check_truthful(mech, sweep)) for label, mech in _variants()}
    ok = not any(counts.values())
    record(1, ok, f"truthfulness, n<=4, W=3, {len(sweep.instances)} graphs: "
                  f"violations {counts}")
    assert ok


def test_2_monotonicity_sweep(sweep):
    counts = {label: len(check_monotone(mech, sweep)) for label, mech in _variants()}
    ok = not any(counts.values())
    record(2, ok, f"monotonicity, same sweep: violations {counts}")
    assert ok


def test_3_congest_prices_match_local(prices_result, corpus):
    bad = [v for v in prices_result.violations if "congest" in v.detail]
    ok = not bad and prices_result.checked > 0
    record(3, ok, f"MWIS CONGEST prices == LOCAL critical prices on "
                  f"{len(corpus.instances)} graphs, {prices_result.checked} members, "
                  f"{len(bad)} mismatches")
    assert ok


def test_4_congest_budget(prices_result, corpus):
    bad = [v for v in prices_result.violations if "congest" not in v.detail]
    ok = not bad
    record(4, ok, f"every MWIS allocation/price message fits {CONGEST_CONSTANT}*ceil(log2 n) "
                  f"bits: {len(bad)} violations")
    assert ok


def test_5_approximation_bounds(corpus):
    res = suite_approx(corpus, MECHANISMS, RATE_SCHEDULES)
    by = Counter(v.mechanism for v in res.violations)
    ok = res.ok and len(RATE_SCHEDULES) >= 3
    record(5, ok, f"approximation bounds vs brute force, {res.checked} checks, "
                  f"{len(RATE_SCHEDULES)} rate schedules: violations {dict(by)}")
    assert ok


def test_6_mwds_adaptive_equals_nonadaptive(corpus):
    res = suite_equivalence(corpus)
    record(6, res.ok, f"MWDS adaptive == non-adaptive on {res.checked} bid vectors: "
                      f"{len(res.violations)} differences")
    assert res.ok


def test_7_round_bounds(corpus):
    res = suite_rounds(corpus, BINARY_MECHANISMS)
    weight_dependent = [v for v in res.violations if "error" in v.detail]
    over = len(res.violations) - len(weight_dependent)
    record(7, res.ok, f"round bounds with frozen constants {ROUND_BOUNDS}: "
                      f"{over} over bound, {len(weight_dependent)} weight-dependent MWVC graphs")
    assert res.ok


def test_8_discretization(sweep):
    res = suite_discretized(sweep, BINARY_MECHANISMS, EPSILONS, samples=3, seed=0)
    kinds = Counter("quality" if "error" in v.detail else "truthful"
                    for v in res.violations)
    record(8, res.ok, f"discretised pipeline, eps in {[str(e) for e in EPSILONS]}, "
                      f"{res.checked} runs: truthfulness violations {kinds['truthful']}, "
                      f"alpha/(1-eps) violations {kinds['quality']}")
    assert res.ok


def test_9_mutants_are_caught():
    tiny = small_corpus(max_n=3)
    caught = {
        "first-price payments": len(check_truthful(mutants.first_price(), tiny)),
        "reversed tie-breaking": len(suite_prices(tiny, mech=mutants.reversed_tie()).violations),
        "no blocking check": len(suite_prices(tiny, mech=mutants.no_blocking_check()).violations),
        "non-monotone rule": len(check_monotone(mutants.anti_monotone(), tiny)),
    }
    ok = all(caught.values())
    record(9, ok, f"planted faults trigger violations: {caught}")
    assert ok
