"""Verification suites run against brute-force oracles.

Each suite walks a :class:`~locmech.oracle.Corpus` and returns a
:class:`SuiteResult`.  A suite passes iff it reports no violations.  Work is
split per instance, so ``workers > 1`` fans the corpus out over processes
without changing the result.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .coloring import color_graph, color_two_hop
from .graph import Objective, WeightedGraph
from .myerson import (DiscretizationConfig, MechanismSpec, critical_price,
                      discretize, run_discretized)
from .mwds import mwds_allocate, mwds_allocate_nonadaptive, mwds_mechanism
from .mwis import mwis_allocate, mwis_mechanism
from .mwvc import mwvc_mechanism
from .oracle import (BoundViolation, Corpus, Violation, check_monotone,
                     check_truthful, harmonic, opt_mwds, opt_mwis, opt_mwvc,
                     opt_slot_backtrack, pad_rates, ratio_of, small_corpus)
from .sim import (LOCAL, CongestionError, ExecutionModel, assert_congest,
                  congest)
from .slot import slot_mechanism, slot_value, slot_verify_ratio

MECHANISMS = ("mwis", "mwvc", "mwds", "slot")
BINARY_MECHANISMS = ("mwis", "mwvc", "mwds")

# Slot rate schedules swept by default; slot 1 first, non-increasing.
RATE_SCHEDULES: tuple[tuple[Fraction, ...], ...] = (
    (Fraction(1),),
    (Fraction(3), Fraction(2), Fraction(1)),
    (Fraction(5), Fraction(5), Fraction(1), Fraction(1)),
    (Fraction(8), Fraction(4), Fraction(2), Fraction(1), Fraction(1, 2)),
)

CONGEST_CONSTANT = 8

# Round-bound constants, fitted once on the default corpus and frozen:
#   mwis  rounds <= A * (Delta+1)(W+1) + B
#   mwvc  rounds <= A * Delta + B
#   mwds  rounds <= A * (Delta+1)^3 (W+1) + B
# Rounds count colouring plus allocation.
ROUND_BOUNDS = {
    "mwis": (2, 4),
    "mwvc": (2, 16),
    "mwds": (4, 8),
}

EPSILONS = (Fraction(1), Fraction(1, 2), Fraction(1, 4))


def make_mechanism(name: str, rates: Sequence | None = None) -> MechanismSpec:
    if name == "mwis":
        return mwis_mechanism()
    if name == "mwvc":
        return mwvc_mechanism()
    if name == "mwds":
        return mwds_mechanism()
    if name == "slot":
        if rates is None:
            raise ValueError("slot mechanism needs rates")
        return slot_mechanism(rates)
    raise ValueError(f"unknown mechanism {name!r}")


@dataclass
class SuiteResult:
    suite: str
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0
    rows: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "SuiteResult") -> "SuiteResult":
        return SuiteResult(self.suite, self.violations + other.violations,
                           self.checked + other.checked, self.rows + other.rows)

    def summary(self) -> dict:
        return {"suite": self.suite, "checked": self.checked,
                "violations": len(self.violations), "ok": self.ok}


def _schedules(rates_list):
    return RATE_SCHEDULES if rates_list is None else tuple(tuple(r) for r in rates_list)


def _mechs(mechanisms, rates_list):
    for name in mechanisms:
        if name == "slot":
            for rates in _schedules(rates_list):
                yield make_mechanism("slot", rates), rates
        else:
            yield make_mechanism(name), None


# --- suites --------------------------------------------------------------------

def suite_truthful(corpus: Corpus, mechanisms=MECHANISMS, rates_list=None,
                   model: ExecutionModel = LOCAL) -> SuiteResult:
    res = SuiteResult("truthful")
    for mech, _ in _mechs(mechanisms, rates_list):
        res.violations += check_truthful(mech, corpus, model)
        res.checked += sum(len(corpus.lines(g)) * (g.weight_bound + 1) ** 2
                           for g in corpus.instances)
    return res


def suite_monotone(corpus: Corpus, mechanisms=MECHANISMS, rates_list=None,
                   model: ExecutionModel = LOCAL) -> SuiteResult:
    res = SuiteResult("monotone")
    for mech, _ in _mechs(mechanisms, rates_list):
        res.violations += check_monotone(mech, corpus, model)
        res.checked += sum(len(corpus.lines(g)) for g in corpus.instances)
    return res


def suite_prices(corpus: Corpus, c: int = CONGEST_CONSTANT,
                 mech: MechanismSpec | None = None) -> SuiteResult:
    """CONGEST price protocol against re-simulated critical prices.

    Both the allocation and the price phase run in CONGEST with constant
    ``c``, so an oversized message surfaces as a violation too.
    """
    model = congest(c)
    mech = (mwis_mechanism(prices="local") if mech is None else mech).cached()
    protocol = mwis_mechanism() if mech.prices is None else mech
    res = SuiteResult("prices")
    for g in corpus.instances:
        coloring = color_graph(g, model)[0]
        for bids in corpus.bid_vectors(g):
            try:
                members, atrace = mwis_allocate(g, bids, coloring, model)
                labels = [v in members for v in range(g.node_count)]
                got, ptrace = protocol.prices(g, bids, labels, model)
            except CongestionError as exc:
                res.violations.append(Violation("prices", "mwis", g, bids, exc.sender,
                                                {"error": str(exc)}))
                continue
            for trace, phase in ((atrace, "allocation"), (ptrace, "prices")):
                msg = assert_congest(trace, g.node_count, c)
                if msg:
                    res.violations.append(Violation("prices", "mwis", g, bids, None,
                                                    {"phase": phase, "error": msg}))
            for v in sorted(members):
                want = critical_price(mech, g, bids, v, LOCAL)
                res.checked += 1
                if got[v] != want:
                    res.violations.append(Violation("prices", "mwis", g, bids, v,
                                                    {"congest": got[v], "local": want}))
    return res


def _approx_row(name, g, bids, rates=None):
    """``(row, violation detail or None)`` for one instance and bid vector."""
    mech = make_mechanism(name, rates)
    labels, _ = mech.allocate(g, bids, LOCAL)
    d = g.max_degree
    if name == "slot":
        try:
            opt, ratio = slot_verify_ratio(g, bids, labels, rates)
            bad = None
        except BoundViolation as exc:
            opt = opt_slot_backtrack(g, bids, rates)
            ratio, bad = ratio_of(opt, slot_value(bids, labels, pad_rates(rates, g))), str(exc)
        alg = slot_value(bids, labels, pad_rates(rates, g))
        head = pad_rates(rates, g)[:d + 1]
        bound = (head[0] * (d + 1) / sum(head)) if sum(head) else None
        return {"mechanism": f"slot{list(map(str, rates))}", "n": g.node_count,
                "delta": d, "alg": alg, "opt": opt, "ratio": ratio,
                "bound": bound}, bad
    chosen = [v for v, x in enumerate(labels) if x]
    alg = sum((bids[v] for v in chosen), 0)
    if name == "mwis":
        opt = opt_mwis(g, bids)
        bound = max(d, 1)
        bad = opt > bound * alg
        ratio = ratio_of(opt, alg)
    elif name == "mwvc":
        opt = opt_mwvc(g, bids)
        bound = 2
        bad = alg > bound * opt
        ratio = ratio_of(alg, opt)
    else:
        opt = opt_mwds(g, bids)
        bound = harmonic(d + 1)
        bad = alg > bound * opt
        ratio = ratio_of(alg, opt)
    row = {"mechanism": name, "n": g.node_count, "delta": d, "alg": alg,
           "opt": opt, "ratio": ratio, "bound": bound}
    return row, (f"{name}: ALG={alg}, OPT={opt}, bound {bound}" if bad else None)


def suite_approx(corpus: Corpus, mechanisms=MECHANISMS, rates_list=None) -> SuiteResult:
    res = SuiteResult("approx")
    for g in corpus.instances:
        for bids in corpus.bid_vectors(g):
            for name in mechanisms:
                for rates in (_schedules(rates_list) if name == "slot" else (None,)):
                    row, bad = _approx_row(name, g, bids, rates)
                    res.checked += 1
                    res.rows.append(row)
                    if bad:
                        res.violations.append(Violation("approx", name, g, bids, None,
                                                        {"error": bad}))
    return res


def round_bound(name: str, g: WeightedGraph) -> int:
    a, b = ROUND_BOUNDS[name]
    d, W = g.max_degree, g.weight_bound
    if name == "mwis":
        return a * (d + 1) * (W + 1) + b
    if name == "mwvc":
        return a * d + b
    return a * (d + 1) ** 3 * (W + 1) + b


def measure_rounds(name: str, g: WeightedGraph, bids) -> int:
    """Colouring plus allocation rounds of one run."""
    mech = make_mechanism(name)
    return mech.setup(g, LOCAL).then(mech.allocate(g, bids, LOCAL)[1]).rounds


def suite_rounds(corpus: Corpus, mechanisms=BINARY_MECHANISMS) -> SuiteResult:
    res = SuiteResult("rounds")
    for g in corpus.instances:
        vectors = corpus.bid_vectors(g)
        for name in mechanisms:
            bound = round_bound(name, g)
            seen = set()
            for bids in vectors:
                r = measure_rounds(name, g, bids)
                seen.add(r)
                res.checked += 1
                if r > bound:
                    res.violations.append(Violation("rounds", name, g, bids, None,
                                                    {"rounds": r, "bound": bound}))
            if name == "mwvc" and len(seen) > 1:
                res.violations.append(Violation("rounds", name, g, g.weights, None,
                                                {"error": "rounds depend on weights",
                                                 "rounds": sorted(seen)}))
            res.rows.append({"mechanism": name, "n": g.node_count,
                             "delta": g.max_degree, "W": g.weight_bound,
                             "max_rounds": max(seen), "bound": bound})
    return res


def suite_equivalence(corpus: Corpus) -> SuiteResult:
    res = SuiteResult("equivalence")
    for g in corpus.instances:
        col = color_two_hop(g)[0]
        for bids in corpus.bid_vectors(g):
            adaptive, _ = mwds_allocate(g, bids, col)
            fixed = mwds_allocate_nonadaptive(g, bids, col)
            res.checked += 1
            if adaptive != fixed:
                res.violations.append(Violation("equivalence", "mwds", g, bids, None,
                                                {"adaptive": sorted(adaptive),
                                                 "nonadaptive": sorted(fixed)}))
    return res


# --- discretisation ---------------------------------------------------------------

def sample_real_weights(rng: random.Random, n: int, W: int, denominator: int = 16):
    return tuple(Fraction(rng.randint(0, W * denominator), denominator) for _ in range(n))


def _opt(name, g, weights):
    return {"mwis": opt_mwis, "mwvc": opt_mwvc, "mwds": opt_mwds}[name](g, weights)


def _alpha(name, g):
    if name == "mwis":
        return Fraction(max(g.max_degree, 1))
    if name == "mwvc":
        return Fraction(2)
    return harmonic(g.max_degree + 1)


def discretized_truthful(mech: MechanismSpec, g: WeightedGraph, truth,
                         cfg: DiscretizationConfig) -> list[Violation]:
    """For every node, no grid deviation beats bidding the true real weight."""
    out = []
    for v in range(g.node_count):
        def utility(bid):
            b = truth[:v] + (bid,) + truth[v + 1:]
            res = run_discretized(mech, g, b, cfg)
            return mech.utility(res.allocation[v], truth[v]) + res.payments[v]

        honest = utility(truth[v])
        for i in range(cfg.steps + 1):
            dev = utility(cfg.value(i))
            if dev > honest:
                out.append(Violation("discretized", mech.name, g, truth, v,
                                     {"epsilon": cfg.epsilon, "true_weight": truth[v],
                                      "deviation": cfg.value(i),
                                      "truthful_utility": honest,
                                      "deviation_utility": dev}))
                break
    return out


def discretized_quality(name: str, g: WeightedGraph, truth,
                        cfg: DiscretizationConfig):
    """``(row, violation detail or None)`` for the alpha/(1-eps) bound."""
    mech = make_mechanism(name)
    res = run_discretized(mech, g, truth, cfg)
    chosen = [v for v, x in enumerate(res.allocation) if x]
    alg = sum((truth[v] for v in chosen), Fraction(0))
    opt = _opt(name, g, truth)
    alpha = _alpha(name, g)
    row = {"mechanism": name, "epsilon": cfg.epsilon, "alg": alg, "opt": opt,
           "alpha": alpha}
    if cfg.epsilon >= 1:
        return dict(row, bound=None), None  # alpha / (1 - eps) is unbounded
    bound = alpha / (1 - cfg.epsilon)
    row["bound"] = bound
    bad = opt > bound * alg if mech.objective == Objective.MAX else alg > bound * opt
    return row, (f"{name} eps={cfg.epsilon}: ALG={alg}, OPT={opt}, bound {bound}"
                 if bad else None)


def suite_discretized(corpus: Corpus, mechanisms=BINARY_MECHANISMS,
                      epsilons=EPSILONS, samples: int = 2, seed: int = 0,
                      check: str = "both") -> SuiteResult:
    """Real weights on ``[0, W]``; ``check`` is ``truthful``, ``quality`` or ``both``."""
    res = SuiteResult("discretized")
    for g in corpus.instances:
        W = g.weight_bound
        rng = random.Random(repr((seed, g.structure, W)))
        draws = [sample_real_weights(rng, g.node_count, W) for _ in range(samples)]
        for eps in epsilons:
            cfg = DiscretizationConfig(eps, W)
            for truth in draws:
                for name in mechanisms:
                    res.checked += 1
                    if check in ("truthful", "both"):
                        res.violations += discretized_truthful(
                            make_mechanism(name).cached(), g, truth, cfg)
                    if check in ("quality", "both"):
                        row, bad = discretized_quality(name, g, truth, cfg)
                        res.rows.append(row)
                        if bad:
                            res.violations.append(Violation(
                                "discretized", name, g, discretize(
                                    truth, cfg, make_mechanism(name).objective),
                                None, {"error": bad, "real_weights": list(truth)}))
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "truthful": suite_truthful,
    "monotone": suite_monotone,
    "prices": suite_prices,
    "approx": suite_approx,
    "rounds": suite_rounds,
    "equivalence": suite_equivalence,
    "discretized": suite_discretized,
}


def _run_chunk(args):
    name, corpus, kwargs = args
    return SUITES[name](corpus, **kwargs)


def run_suite(name: str, corpus: Corpus | None = None, workers: int = 1,
              **kwargs) -> SuiteResult:
    """Run one suite, optionally split over ``workers`` processes."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    corpus = small_corpus() if corpus is None else corpus
    if workers <= 1 or len(corpus.instances) < 2:
        return SUITES[name](corpus, **kwargs)
    size = -(-len(corpus.instances) // workers)
    chunks = [Corpus(corpus.instances[i:i + size], corpus.exhaustive_n,
                     corpus.samples, corpus.seed)
              for i in range(0, len(corpus.instances), size)]
    with ProcessPoolExecutor(len(chunks)) as pool:
        parts = list(pool.map(_run_chunk, [(name, c, kwargs) for c in chunks]))
    out = SuiteResult(name)
    for part in parts:
        out = out.merge(part)
    return out
