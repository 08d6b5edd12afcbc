"""Deterministic distributed colourings used only for tie-breaking.

Colour reduction starts from the node ids, applies Linial-style polynomial
reduction steps while they shrink the palette, then removes one colour
class per round until ``Delta + 1`` colours remain.  The result depends on
the graph structure and ids only, never on weights or bids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .graph import WeightedGraph, line_graph, square_graph
from .sim import LOCAL, ExecutionModel, Halt, NodeProgram, RoundTrace, run


@dataclass(frozen=True)
class ColorAssignment:
    colors: tuple[int, ...]
    palette_size: int

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, math.isqrt(q) + 1))


def _next_prime(q: int) -> int:
    while not _is_prime(q):
        q += 1
    return q


def _linial_params(m: int, delta: int) -> tuple[int, int] | None:
    """Best ``(q, d)`` for one reduction step from ``m`` colours, or None."""
    best = None
    for d in range(1, max(2, m.bit_length()) + 1):
        root = math.ceil(m ** (1.0 / (d + 1)))
        while root ** (d + 1) < m:
            root += 1
        q = _next_prime(max(delta * d + 1, root, 2))
        if best is None or q < best[0]:
            best = (q, d)
    if best is None or best[0] ** 2 >= m:
        return None
    return best


@lru_cache(maxsize=None)
def reduction_schedule(n: int, delta: int) -> tuple[tuple, ...]:
    """Per-round plan shared by all nodes: Linial steps then greedy classes."""
    plan: list[tuple] = []
    m = n
    while True:
        params = _linial_params(m, delta)
        if params is None:
            break
        plan.append(("linial",) + params)
        m = params[0] ** 2
    plan.extend(("greedy", k) for k in range(delta + 1, m))
    return tuple(plan)


def _poly(c: int, q: int, d: int, x: int) -> int:
    acc = 0
    for _ in range(d + 1):
        c, coeff = divmod(c, q)
        acc = (acc * x + coeff) % q
    return acc


class ColorReduction(NodeProgram):
    schema = {"color": ("color",)}

    def init(self, ctx, local_input):
        return {"color": ctx.node, "nbr": {}}

    def step(self, ctx, state, rnd, inbox):
        plan = reduction_schedule(ctx.n, ctx.max_degree)
        if ctx.max_degree == 0:
            return state, {}, Halt(0)
        if rnd == 1:
            if not plan:
                return state, {}, Halt(state["color"])
            return state, {u: ("color", state["color"]) for u in ctx.neighbors}, None
        nbr = dict(state["nbr"])
        for u, (_, c) in inbox:
            nbr[u] = c
        color = state["color"]
        action = plan[rnd - 2]
        if action[0] == "linial":
            _, q, d = action
            others = set(nbr.values())
            for x in range(q):
                y = _poly(color, q, d, x)
                if all(_poly(c, q, d, x) != y for c in others):
                    color = x * q + y
                    break
            else:  # pragma: no cover - excluded by q > delta * d
                raise AssertionError("Linial step found no free point")
        elif color == action[1]:
            used = set(nbr.values())
            color = min(c for c in range(ctx.max_degree + 1) if c not in used)
        changed = color != state["color"]
        state = {"color": color, "nbr": nbr}
        if rnd - 2 == len(plan) - 1:
            return state, {}, Halt(color)
        out = {}
        if changed or action[0] == "linial":
            out = {u: ("color", color) for u in ctx.neighbors}
        return state, out, None


def is_proper(g: WeightedGraph, colors) -> bool:
    return all(colors[u] != colors[v] for u, v in g.edges)


@lru_cache(maxsize=4096)
def _color_structure(structure, model: ExecutionModel):
    n, edges = structure
    g = WeightedGraph.from_edges(n, edges, [0] * n, 0)
    colors, trace = run(ColorReduction(), g, model=model)
    return ColorAssignment(tuple(colors), g.max_degree + 1), trace


def color_graph(g: WeightedGraph, model: ExecutionModel = LOCAL):
    """Proper (Delta+1)-colouring of ``g``; returns ``(assignment, trace)``."""
    return _color_structure(g.structure, model)


def color_two_hop(g: WeightedGraph, model: ExecutionModel = LOCAL):
    """Colouring proper on the square of ``g`` with at most Delta^2 + 1 colours.

    Runs the reduction on the square graph; each simulated round costs two
    rounds of ``g`` (send, then relay), so the reported round count doubles.
    """
    sq = square_graph(g)
    assignment, trace = _color_structure(sq.structure, model)
    return assignment, RoundTrace(2 * trace.rounds, trace.messages_total,
                                  trace.max_message_bits)


def color_line_graph(g: WeightedGraph, model: ExecutionModel = LOCAL):
    """Edge colouring (indexed like ``g.edges``) with at most 2*Delta - 1 colours.

    Both endpoints of an edge hold its state, so one round of the line graph
    is one round of ``g``.
    """
    if not g.edges:
        raise ValueError("graph has no edges")
    return _color_structure(line_graph(g).structure, model)
