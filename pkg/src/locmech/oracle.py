"""Brute-force ground truth and exhaustive property sweeps.

Every optimum has two independent implementations: a bitmask / product
enumeration and a recursive branch-and-bound.  Sweeps work on *lines*: a node
``v`` together with fixed bids of everyone else, along which ``v``'s own bid
runs over the whole grid.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import WeightedGraph, format_graph


class BoundViolation(AssertionError):
    pass


class CapExceeded(ValueError):
    pass


def ratio_of(a, b):
    """``a / b`` as an exact ratio; 1 when both vanish, inf when only ``b`` does."""
    if b == 0:
        return Fraction(1) if a == 0 else math.inf
    return Fraction(a) / Fraction(b)


def harmonic(k: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def _check_cap(g: WeightedGraph, cap: int):
    if g.node_count > cap:
        raise CapExceeded(f"{g.node_count} nodes exceeds brute-force cap {cap}")


def _masks(g: WeightedGraph):
    return [sum(1 << u for u in g.adjacency[v]) for v in range(g.node_count)]


def opt_mwis(g: WeightedGraph, weights: Sequence, cap: int = 20):
    _check_cap(g, cap)
    nb = _masks(g)
    best = 0
    for s in range(1 << g.node_count):
        if any(s >> v & 1 and s & nb[v] for v in range(g.node_count)):
            continue
        best = max(best, sum((weights[v] for v in range(g.node_count) if s >> v & 1), 0))
    return best


def opt_mwvc(g: WeightedGraph, weights: Sequence, cap: int = 20):
    _check_cap(g, cap)
    best = None
    for s in range(1 << g.node_count):
        if all(s >> u & 1 or s >> v & 1 for u, v in g.edges):
            cost = sum((weights[v] for v in range(g.node_count) if s >> v & 1), 0)
            best = cost if best is None else min(best, cost)
    return best


def opt_mwds(g: WeightedGraph, weights: Sequence, cap: int = 20):
    _check_cap(g, cap)
    closed = [m | 1 << v for v, m in enumerate(_masks(g))]
    full = (1 << g.node_count) - 1
    best = None
    for s in range(1 << g.node_count):
        cov = 0
        for v in range(g.node_count):
            if s >> v & 1:
                cov |= closed[v]
        if cov == full:
            cost = sum((weights[v] for v in range(g.node_count) if s >> v & 1), 0)
            best = cost if best is None else min(best, cost)
    return best


def pad_rates(rates: Sequence, g: WeightedGraph) -> tuple:
    rates = tuple(Fraction(r) for r in rates)
    need = g.max_degree + 1
    return rates + (Fraction(0),) * max(0, need - len(rates))


def opt_slot(g: WeightedGraph, weights: Sequence, rates: Sequence,
             cap: int = 200_000):
    """Best proper assignment ``V -> {1..Delta+1}`` by full product enumeration."""
    rates = pad_rates(rates, g)
    s = g.max_degree + 1
    if s ** g.node_count > cap:
        raise CapExceeded(f"{s}^{g.node_count} assignments exceeds cap {cap}")
    best = None
    for slots in itertools.product(range(1, s + 1), repeat=g.node_count):
        if any(slots[u] == slots[v] for u, v in g.edges):
            continue
        val = sum((rates[slots[v] - 1] * weights[v] for v in range(g.node_count)),
                  Fraction(0))
        best = val if best is None else max(best, val)
    return best


# --- second, independent enumeration strategy --------------------------------

def opt_mwis_bnb(g: WeightedGraph, weights: Sequence):
    best = [0]

    def go(cands: frozenset, acc):
        if acc + sum((weights[v] for v in cands), 0) <= best[0]:
            return
        if not cands:
            best[0] = max(best[0], acc)
            return
        v = min(cands)
        go(cands - {v} - set(g.adjacency[v]), acc + weights[v])
        go(cands - {v}, acc)

    go(frozenset(range(g.node_count)), 0)
    return best[0]


def opt_mwvc_bnb(g: WeightedGraph, weights: Sequence):
    best = [sum(weights, 0)]

    def go(edges: tuple, chosen: frozenset, acc):
        if acc >= best[0]:
            return
        edges = tuple(e for e in edges if e[0] not in chosen and e[1] not in chosen)
        if not edges:
            best[0] = acc
            return
        u, v = edges[0]
        go(edges, chosen | {u}, acc + weights[u])
        # leaving u out forces every neighbour of u in
        forced = set(g.adjacency[u]) - chosen
        go(edges, chosen | forced, acc + sum((weights[x] for x in forced), 0))

    go(g.edges, frozenset(), 0)
    return best[0]


def opt_mwds_bnb(g: WeightedGraph, weights: Sequence):
    best = [sum(weights, 0)]
    closed = [set(g.closed_neighborhood(v)) for v in range(g.node_count)]

    def go(uncovered: frozenset, acc):
        if acc >= best[0]:
            return
        if not uncovered:
            best[0] = acc
            return
        x = min(uncovered)
        for v in sorted(closed[x]):
            go(uncovered - closed[v], acc + weights[v])

    go(frozenset(range(g.node_count)), 0)
    return best[0]


def opt_slot_backtrack(g: WeightedGraph, weights: Sequence, rates: Sequence):
    """Depth-first over proper assignments, pruned by a best-slot-for-all bound."""
    rates = pad_rates(rates, g)
    s = g.max_degree + 1
    slots = [0] * g.node_count
    best = [None]
    tail = [Fraction(0)] * (g.node_count + 1)
    for v in range(g.node_count - 1, -1, -1):
        tail[v] = tail[v + 1] + rates[0] * weights[v]

    def go(v, acc):
        if best[0] is not None and acc + tail[v] <= best[0]:
            return
        if v == g.node_count:
            if best[0] is None or acc > best[0]:
                best[0] = acc
            return
        used = {slots[u] for u in g.adjacency[v] if u < v}
        for j in range(1, s + 1):
            if j not in used:
                slots[v] = j
                go(v + 1, acc + rates[j - 1] * weights[v])
        slots[v] = 0

    go(0, Fraction(0))
    return best[0]


# --- corpus -------------------------------------------------------------------

def _connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, stack = {0}, [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def labeled_connected_graphs(n: int, weight_bound: int = 0) -> list[WeightedGraph]:
    """All connected graphs on labelled nodes ``0..n-1`` (no isomorphism pruning)."""
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if _connected(n, edges):
            out.append(WeightedGraph.from_edges(n, edges, [0] * n, weight_bound))
    return out


def random_graph(rng: random.Random, n: int, max_degree: int, p: float,
                 weight_bound: int) -> WeightedGraph:
    deg = [0] * n
    edges = []
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    for u, v in pairs:
        if deg[u] < max_degree and deg[v] < max_degree and rng.random() < p:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    weights = [rng.randint(0, weight_bound) for _ in range(n)]
    return WeightedGraph.from_edges(n, sorted(edges), weights, weight_bound)


def random_graphs(count: int, seed: int = 0, n_max: int = 10,
                  max_degree: int = 4, w_max: int = 6) -> list[WeightedGraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, n_max)
        W = rng.randint(1, w_max)
        out.append(random_graph(rng, n, max_degree, rng.uniform(0.2, 0.8), W))
    return out


@dataclass
class Corpus:
    """Instances plus the bid vectors to sweep on each."""

    instances: list[WeightedGraph]
    exhaustive_n: int = 4
    samples: int = 6
    seed: int = 0

    def bid_vectors(self, g: WeightedGraph) -> list[tuple]:
        W = g.weight_bound
        if g.node_count <= self.exhaustive_n:
            return list(itertools.product(range(W + 1), repeat=g.node_count))
        rng = random.Random(hash((self.seed,) + g.structure + (W,)) & 0xFFFFFFFF)
        vecs = {g.weights}
        while len(vecs) < self.samples:
            vecs.add(tuple(rng.randint(0, W) for _ in range(g.node_count)))
        return sorted(vecs)

    def lines(self, g: WeightedGraph) -> list[tuple[int, tuple]]:
        """``(v, bids)`` pairs; the sweep varies ``bids[v]`` over the grid."""
        seen = set()
        for b in self.bid_vectors(g):
            for v in range(g.node_count):
                key = (v, b[:v] + (0,) + b[v + 1:])
                seen.add(key)
        return sorted(seen)


def small_corpus(max_n: int = 4, W: int = 3) -> Corpus:
    graphs = [g for n in range(1, max_n + 1)
              for g in labeled_connected_graphs(n, W)]
    return Corpus(graphs, exhaustive_n=max_n)


def default_corpus(W: int = 3, random_count: int = 100, seed: int = 0) -> Corpus:
    """Labelled connected graphs with n <= 5 plus seeded random graphs."""
    graphs = [g for n in range(1, 6) for g in labeled_connected_graphs(n, W)]
    graphs += random_graphs(random_count, seed)
    return Corpus(graphs, exhaustive_n=4, seed=seed)


# --- sweeps -------------------------------------------------------------------

@dataclass
class Violation:
    suite: str
    mechanism: str
    graph: WeightedGraph
    bids: tuple
    node: int | None = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        text = format_graph(self.graph, self.bids)
        replay = ("printf '" + text.replace("\n", "\\n") + "' > case.txt && "
                  f"locmech run --mechanism {self.mechanism} --graph case.txt")
        return {"suite": self.suite, "mechanism": self.mechanism,
                "graph": text, "bids": list(self.bids), "node": self.node,
                "detail": {k: _plain(x) for k, x in self.detail.items()},
                "replay": replay}


def _plain(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    return x


def write_report(path, violations: Iterable[Violation], summary: dict):
    with open(path, "w") as fh:
        for viol in violations:
            fh.write(json.dumps(viol.to_json()) + "\n")
        fh.write(json.dumps({"summary": summary}) + "\n")


def _grid(g):
    return range(g.weight_bound + 1)


def _with(bids, v, x):
    return bids[:v] + (x,) + bids[v + 1:]


def check_monotone(mech, corpus: Corpus, model=None) -> list[Violation]:
    """Per-unit allocation ``utility(label, 1)`` must not drop as a node's bid rises.

    This one condition covers selection for maximisation, de-selection for
    minimisation (utility -1 while selected) and slot rates.
    """
    from .sim import LOCAL
    model = LOCAL if model is None else model
    mech = mech.cached()
    out = []
    for g in corpus.instances:
        for v, base in corpus.lines(g):
            amounts = []
            for x in _grid(g):
                labels, _ = mech.allocate(g, _with(base, v, x), model)
                amounts.append(mech.utility(labels[v], 1))
            for x in range(1, len(amounts)):
                if amounts[x] < amounts[x - 1]:
                    out.append(Violation("monotone", mech.name, g, _with(base, v, x),
                                         v, {"lower_bid": x - 1, "higher_bid": x,
                                             "amounts": amounts}))
                    break
    return out


def check_truthful(mech, corpus: Corpus, model=None) -> list[Violation]:
    """Exact sweep: no deviation bid beats the truthful bid for any true weight."""
    from .myerson import MonotonicityError, run_mechanism
    from .sim import LOCAL
    model = LOCAL if model is None else model
    mech = mech.cached()
    out = []
    for g in corpus.instances:
        memo: dict = {}

        def outcome(b):
            if b not in memo:
                res = run_mechanism(mech, g, b, model)
                memo[b] = (res.allocation, res.payments)
            return memo[b]

        for v, base in corpus.lines(g):
            try:
                res = [outcome(_with(base, v, x)) for x in _grid(g)]
            except MonotonicityError as exc:
                out.append(Violation("truthful", mech.name, g, base, v,
                                     {"error": str(exc)}))
                continue
            for w in _grid(g):
                util = [mech.utility(labels[v], w) + pays[v] for labels, pays in res]
                best = max(range(len(util)), key=lambda x: util[x])
                if util[best] > util[w]:
                    out.append(Violation("truthful", mech.name, g, _with(base, v, w),
                                         v, {"true_weight": w, "deviation": best,
                                             "truthful_utility": util[w],
                                             "deviation_utility": util[best]}))
    return out
