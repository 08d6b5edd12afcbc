"""Local-ratio minimum-weight vertex cover mechanism.

Edges are handled one colour class of a proper line-graph colouring per
round: the endpoints swap residuals ``t``, both subtract ``min(t(u), t(v))``
and a node whose residual reaches zero on one of its edges joins the cover.
Running time depends only on the palette, never on the weights.
"""

from __future__ import annotations

from .coloring import ColorAssignment, color_line_graph
from .graph import Objective, WeightedGraph
from .myerson import MechanismSpec, critical_price
from .oracle import BoundViolation, opt_mwvc, ratio_of
from .sim import LOCAL, ExecutionModel, Halt, NodeProgram, RoundTrace, run


class LocalRatioCover(NodeProgram):
    schema = {"t": ("value",)}

    def init(self, ctx, local_input):
        bid, incident = local_input  # incident: {neighbour: (edge id, class)}
        by_class: dict[int, list] = {}
        for u, (eid, cls) in incident.items():
            by_class.setdefault(cls, []).append((u, eid))
        last = max(by_class, default=-1)
        return {"t": bid, "by_class": by_class, "last": last,
                "charges": {}, "hit_zero": False}

    def _send(self, state, cls):
        if state["t"] == 0:
            return {}
        return {u: ("t", state["t"]) for u, _ in state["by_class"].get(cls, [])}

    def step(self, ctx, state, rnd, inbox):
        if state["last"] < 0:
            return state, {}, Halt((False, state["t"], {}))
        if rnd == 1:
            return state, self._send(state, 0), None
        cls = rnd - 2
        got = {u: m[1] for u, m in inbox}
        t = state["t"]
        charges = dict(state["charges"])
        hit = state["hit_zero"]
        for u, eid in state["by_class"].get(cls, []):
            m = min(t, got.get(u, 0))
            t -= m
            charges[eid] = m
            hit = hit or t == 0
        state = dict(state, t=t, charges=charges, hit_zero=hit)
        if cls >= state["last"]:
            return state, {}, Halt((hit, t, charges))
        return state, self._send(state, cls + 1), None


def mwvc_allocate(g: WeightedGraph, bids, edge_coloring: ColorAssignment,
                  model: ExecutionModel = LOCAL):
    """Returns ``(cover, charges by edge id, residuals, trace)``."""
    inputs = []
    for v in range(g.node_count):
        inputs.append((bids[v], {}))
    for eid, (u, v) in enumerate(g.edges):
        cls = edge_coloring[eid]
        inputs[u][1][v] = (eid, cls)
        inputs[v][1][u] = (eid, cls)
    out, trace = run(LocalRatioCover(), g, inputs, model)
    cover = frozenset(v for v, (inc, _, _) in enumerate(out) if inc)
    charges: dict[int, object] = {}
    for _, _, ch in out:
        for eid, m in ch.items():
            if charges.setdefault(eid, m) != m:  # pragma: no cover
                raise AssertionError(f"endpoints disagree on charge of edge {eid}")
    residuals = [t for _, t, _ in out]
    return cover, charges, residuals, trace


def mwvc_sequential(g: WeightedGraph, bids, order):
    """Centralised local ratio over edge ids in ``order``; reference for tests."""
    t = list(bids)
    charges = {}
    hit = [False] * g.node_count
    for eid in order:
        u, v = g.edges[eid]
        m = min(t[u], t[v])
        t[u] -= m
        t[v] -= m
        charges[eid] = m
        hit[u] = hit[u] or t[u] == 0
        hit[v] = hit[v] or t[v] == 0
    return frozenset(v for v in range(g.node_count) if hit[v]), charges, t


def _edge_coloring(g, model):
    if not g.edges:
        return ColorAssignment((), 0), RoundTrace()
    return color_line_graph(g, model)


def mwvc_mechanism() -> MechanismSpec:
    def allocate(g, bids, model=LOCAL):
        cover, _, _, trace = mwvc_allocate(g, bids, _edge_coloring(g, model)[0], model)
        return [v in cover for v in range(g.node_count)], trace

    return MechanismSpec(
        name="mwvc", objective=Objective.MIN, allocate=allocate, selected=bool,
        utility=lambda label, w: -w if label else 0,
        setup=lambda g, model=LOCAL: _edge_coloring(g, model)[1])


def mwvc_prices(g: WeightedGraph, bids, model: ExecutionModel = LOCAL,
                mech: MechanismSpec | None = None) -> dict:
    """Largest grid bid keeping each cover member in the cover."""
    mech = mwvc_mechanism() if mech is None else mech
    labels, _ = mech.allocate(g, bids, model)
    return {v: critical_price(mech, g, bids, v, model)
            for v, x in enumerate(labels) if x}


def mwvc_verify_ratio(g: WeightedGraph, weights, cover, charges=None, cap: int = 20):
    """Brute-force check of ALG <= 2 OPT (and of the charge sandwich when given)."""
    opt = opt_mwvc(g, weights, cap)
    alg = sum((weights[v] for v in cover), 0)
    if alg > 2 * opt:
        raise BoundViolation(f"MWVC: ALG={alg} > 2 * OPT={opt}")
    if charges is not None:
        total = sum(charges.values(), 0)
        if total > opt or alg > 2 * total:
            raise BoundViolation(f"MWVC charges {total} vs OPT={opt}, ALG={alg}")
    return opt, ratio_of(alg, opt)
