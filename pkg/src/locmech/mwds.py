"""Greedy minimum-weight dominating set mechanism.

A node's key is its ineffectiveness ``w(v) / #uncovered in N+(v)`` with the
square-graph colour as tie-break (smaller wins).  One step takes four rounds:

1. active nodes send their key,
2. every node forwards the smallest key it has seen,
3. nodes that got their own key back from all neighbours join and halt,
4. newly covered nodes tell their neighbours.

A node halts without joining once its whole closed neighbourhood is covered.
"""

from __future__ import annotations

from fractions import Fraction

from .coloring import ColorAssignment, color_two_hop
from .graph import Objective, TieKey, WeightedGraph, rank
from .myerson import MechanismSpec, critical_price
from .oracle import BoundViolation, harmonic, opt_mwds, ratio_of
from .sim import LOCAL, ExecutionModel, Halt, NodeProgram, run


def ineff_key(bid, uncovered: int, color: int) -> TieKey:
    return TieKey(Fraction(bid, uncovered), color)


def _order(key: TieKey):
    return rank(key, Objective.MIN)


class GreedyDominatingSet(NodeProgram):
    schema = {"key": ("value", "count", "color"), "min": ("value", "count", "color"),
              "join": (), "covered": ()}

    def init(self, ctx, local_input):
        bid, color = local_input
        return {"bid": bid, "color": color, "covered": False,
                "nbr_covered": {u: False for u in ctx.neighbors},
                "keyed": (), "best": None}

    def _uncovered(self, state):
        return (not state["covered"]) + sum(not c for c in state["nbr_covered"].values())

    def step(self, ctx, state, rnd, inbox):
        phase = (rnd - 1) % 4
        state = dict(state)
        if phase == 0:
            nc = dict(state["nbr_covered"])
            for u, m in inbox:
                if m[0] == "covered":
                    nc[u] = True
            state["nbr_covered"] = nc
            k = self._uncovered(state)
            if k == 0:
                return state, {}, Halt(False)
            state["uncovered"] = k
            msg = ("key", state["bid"], k, state["color"])
            return state, {u: msg for u in ctx.neighbors}, None
        if phase == 1:
            raw = {u: m[1:] for u, m in inbox if m[0] == "key"}
            raw[ctx.node] = (state["bid"], state["uncovered"], state["color"])
            state["keyed"] = tuple(sorted(u for u in raw if u != ctx.node))
            best = max(raw.values(), key=lambda r: _order(ineff_key(*r)))
            state["best"] = best
            return state, {u: ("min",) + best for u in state["keyed"]}, None
        if phase == 2:
            mine = (state["bid"], state["uncovered"], state["color"])
            mins = [m[1:] for _, m in inbox if m[0] == "min"]
            if state["best"] == mine and len(mins) == len(state["keyed"]) \
                    and all(x == mine for x in mins):
                return state, {u: ("join",) for u in state["keyed"]}, Halt(True)
            return state, {}, None
        joiners = {u for u, m in inbox if m[0] == "join"}
        if not joiners:
            return state, {}, None
        nc = dict(state["nbr_covered"])
        for u in joiners:
            nc[u] = True
        state["nbr_covered"] = nc
        if state["covered"]:
            return state, {}, None
        state["covered"] = True
        rest = [u for u in state["keyed"] if u not in joiners]
        return state, {u: ("covered",) for u in rest}, None


def mwds_allocate(g: WeightedGraph, bids, coloring2: ColorAssignment,
                  model: ExecutionModel = LOCAL):
    """Returns ``(dominating set, trace)``."""
    inputs = [(bids[v], coloring2[v]) for v in range(g.node_count)]
    out, trace = run(GreedyDominatingSet(), g, inputs, model)
    return frozenset(v for v, x in enumerate(out) if x), trace


def mwds_allocate_nonadaptive(g: WeightedGraph, bids, coloring2: ColorAssignment,
                              steps: list | None = None):
    """Global sweep over all possible keys in increasing order.

    At the step for key ``x`` every node whose current key equals ``x`` and
    whose closed neighbourhood is not yet covered joins.  ``steps`` collects
    ``(key, joiners)`` when given.
    """
    n = g.node_count
    values = sorted({ineff_key(bids[v], c, coloring2[v])
                     for v in range(n) for c in range(1, g.degree(v) + 2)},
                    key=_order, reverse=True)
    covered = [False] * n
    dom: set[int] = set()
    for x in values:
        join = []
        for v in range(n):
            if v in dom or coloring2[v] != x.color:
                continue
            k = sum(not covered[u] for u in g.closed_neighborhood(v))
            if k and ineff_key(bids[v], k, coloring2[v]) == x:
                join.append(v)
        for v in join:
            dom.add(v)
            for u in g.closed_neighborhood(v):
                covered[u] = True
        if steps is not None and join:
            steps.append((x, tuple(join)))
    return frozenset(dom)


def mwds_mechanism() -> MechanismSpec:
    def allocate(g, bids, model=LOCAL):
        dom, trace = mwds_allocate(g, bids, color_two_hop(g, model)[0], model)
        return [v in dom for v in range(g.node_count)], trace

    return MechanismSpec(
        name="mwds", objective=Objective.MIN, allocate=allocate, selected=bool,
        utility=lambda label, w: -w if label else 0,
        setup=lambda g, model=LOCAL: color_two_hop(g, model)[1])


def mwds_prices(g: WeightedGraph, bids, model: ExecutionModel = LOCAL,
                mech: MechanismSpec | None = None) -> dict:
    mech = mwds_mechanism() if mech is None else mech
    labels, _ = mech.allocate(g, bids, model)
    return {v: critical_price(mech, g, bids, v, model)
            for v, x in enumerate(labels) if x}


def mwds_verify_ratio(g: WeightedGraph, weights, dom, cap: int = 20):
    """Brute-force check of ALG <= H(Delta+1) * OPT in exact arithmetic."""
    opt = opt_mwds(g, weights, cap)
    alg = sum((weights[v] for v in dom), 0)
    bound = harmonic(g.max_degree + 1)
    if alg > bound * opt:
        raise BoundViolation(f"MWDS: ALG={alg} > H_{g.max_degree + 1} * OPT={opt}")
    return opt, ratio_of(alg, opt)
