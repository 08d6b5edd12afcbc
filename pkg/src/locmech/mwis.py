"""Greedy maximum-weight independent set mechanism.

Allocation: after everyone shares ``(bid, colour)``, steps of two rounds
repeat.  In even rounds the current local maxima of the active nodes join
and halt; in odd rounds their neighbours announce elimination and halt.

Prices: each member ``v`` asks its lower neighbours whether another member
above them blocks them.  The first unblocked lower neighbour ``u*`` (in
descending tie order) fixes the price: ``b(u*)`` when ``v`` wins a tie
against it, ``b(u*) + 1`` otherwise, and 0 when there is none.
"""

from __future__ import annotations

from .coloring import ColorAssignment, color_graph
from .graph import Objective, TieKey, WeightedGraph, beats, rank
from .myerson import MechanismSpec
from .oracle import BoundViolation, opt_mwis, ratio_of
from .sim import LOCAL, ExecutionModel, Halt, NodeProgram, run


class GreedyMwis(NodeProgram):
    schema = {"bid": ("value", "color"), "join": (), "elim": ()}

    def __init__(self, tie=beats):
        self.tie = tie

    def init(self, ctx, local_input):
        bid, color = local_input
        return {"key": TieKey(bid, color), "nbr": {}, "active": set(ctx.neighbors)}

    def step(self, ctx, state, rnd, inbox):
        if rnd == 1:
            if not ctx.neighbors:
                return state, {}, Halt(True)
            msg = ("bid",) + tuple(state["key"])
            return state, {u: msg for u in ctx.neighbors}, None
        if rnd % 2 == 1:
            joiners = {u for u, m in inbox if m[0] == "join"}
            if joiners:
                rest = state["active"] - joiners
                return state, {u: ("elim",) for u in rest}, Halt(False)
            return state, {}, None
        nbr = dict(state["nbr"])
        active = set(state["active"])
        for u, m in inbox:
            if m[0] == "bid":
                nbr[u] = TieKey(m[1], m[2])
            elif m[0] == "elim":
                active.discard(u)
        state = {"key": state["key"], "nbr": nbr, "active": active}
        if all(self.tie(state["key"], nbr[u]) for u in active):
            return state, {u: ("join",) for u in active}, Halt(True)
        return state, {}, None


class MwisPrices(NodeProgram):
    """Two-round request/answer price protocol run after the allocation."""

    schema = {"req": (), "ans": ("flag",)}

    def __init__(self, tie=beats, check_blocking=True):
        self.tie = tie
        self.check_blocking = check_blocking

    def init(self, ctx, local_input):
        key, member, nbr = local_input
        lower = [u for u in ctx.neighbors if self.tie(key, nbr[u])]
        lower.sort(key=lambda u: rank(nbr[u], Objective.MAX), reverse=True)
        return {"key": key, "member": member, "nbr": nbr, "lower": lower}

    def step(self, ctx, state, rnd, inbox):
        if rnd == 1:
            if state["member"]:
                if not state["lower"]:
                    return state, {}, Halt(0)
                return state, {u: ("req",) for u in state["lower"]}, None
            return state, {}, None
        if rnd == 2:
            if state["member"]:
                return state, {}, None
            asking = [u for u, m in inbox if m[0] == "req"]
            blocked = len(asking) > 1
            return state, {v: ("ans", blocked) for v in asking}, Halt(None)
        answers = {u: m[1] for u, m in inbox if m[0] == "ans"}
        for u in state["lower"]:
            if self.check_blocking and answers[u]:
                continue
            other = state["nbr"][u]
            price = other.value if state["key"].color < other.color else other.value + 1
            return state, {}, Halt(price)
        return state, {}, Halt(0)


def mwis_allocate(g: WeightedGraph, bids, coloring: ColorAssignment,
                  model: ExecutionModel = LOCAL, tie=beats, max_rounds=None):
    """Run the greedy selection; returns ``(independent set, trace)``."""
    inputs = [(bids[v], coloring[v]) for v in range(g.node_count)]
    out, trace = run(GreedyMwis(tie), g, inputs, model, max_rounds)
    return frozenset(v for v, x in enumerate(out) if x), trace


def mwis_prices_congest(g: WeightedGraph, bids, coloring: ColorAssignment,
                        members, model: ExecutionModel = LOCAL, tie=beats,
                        check_blocking=True):
    """Critical prices of the members of ``members`` via small messages."""
    inputs = []
    for v in range(g.node_count):
        nbr = {u: TieKey(bids[u], coloring[u]) for u in g.adjacency[v]}
        inputs.append((TieKey(bids[v], coloring[v]), v in members, nbr))
    out, trace = run(MwisPrices(tie, check_blocking), g, inputs, model)
    return {v: out[v] for v in members}, trace


def mwis_verify_ratio(g: WeightedGraph, weights, members, cap: int = 20):
    """Brute-force optimum and ratio; raises if OPT > max(Delta, 1) * ALG."""
    opt = opt_mwis(g, weights, cap)
    alg = sum((weights[v] for v in members), 0)
    if opt > max(g.max_degree, 1) * alg:
        raise BoundViolation(f"MWIS: OPT={opt} > {g.max_degree} * ALG={alg}")
    return opt, ratio_of(opt, alg)


def mwis_mechanism(tie=beats, prices: str = "congest",
                   check_blocking: bool = True) -> MechanismSpec:
    """Greedy MWIS mechanism; ``prices`` is ``"congest"`` or ``"local"``.

    ``tie`` and ``check_blocking`` exist so tests can plant faulty variants.
    """

    def allocate(g, bids, model=LOCAL):
        members, trace = mwis_allocate(g, bids, color_graph(g, model)[0], model, tie)
        return [v in members for v in range(g.node_count)], trace

    def protocol(g, bids, labels, model=LOCAL):
        members = {v for v, x in enumerate(labels) if x}
        return mwis_prices_congest(g, bids, color_graph(g, model)[0], members,
                                   model, tie, check_blocking)

    return MechanismSpec(
        name="mwis", objective=Objective.MAX, allocate=allocate,
        selected=bool,
        utility=lambda label, w: w if label else 0,
        setup=lambda g, model=LOCAL: color_graph(g, model)[1],
        prices=protocol if prices == "congest" else None)

