"""Slot-assignment mechanism with multi-threshold payments.

Slots are numbered from 1 (best) with non-increasing rates.  After the bids
are shared, every round the local maxima among the still unassigned nodes
take the lowest slot not announced by a neighbour, announce it and halt.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coloring import ColorAssignment, color_graph
from .graph import Objective, TieKey, WeightedGraph, beats
from .myerson import MechanismSpec, MonotonicityError
from .oracle import BoundViolation, opt_slot_backtrack, pad_rates, ratio_of
from .sim import LOCAL, ExecutionModel, Halt, NodeProgram, RoundTrace, run


def validate_rates(rates: Sequence) -> tuple[Fraction, ...]:
    rates = tuple(Fraction(r) for r in rates)
    if not rates:
        raise ValueError("need at least one rate")
    if any(r < 0 for r in rates):
        raise ValueError("rates must be non-negative")
    if any(a < b for a, b in zip(rates, rates[1:])):
        raise ValueError("rates must be non-increasing (slot 1 is best)")
    return rates


def rate_of(rates: Sequence, slot: int) -> Fraction:
    return Fraction(rates[slot - 1]) if slot <= len(rates) else Fraction(0)


class GreedySlots(NodeProgram):
    schema = {"bid": ("value", "color"), "slot": ("color",)}

    def init(self, ctx, local_input):
        bid, color = local_input
        return {"key": TieKey(bid, color), "nbr": {}, "used": frozenset(),
                "open": frozenset(ctx.neighbors)}

    def step(self, ctx, state, rnd, inbox):
        if rnd == 1:
            if not ctx.neighbors:
                return state, {}, Halt(1)
            msg = ("bid",) + tuple(state["key"])
            return state, {u: msg for u in ctx.neighbors}, None
        nbr = dict(state["nbr"])
        used, open_ = set(state["used"]), set(state["open"])
        for u, m in inbox:
            if m[0] == "bid":
                nbr[u] = TieKey(m[1], m[2])
            else:
                used.add(m[1])
                open_.discard(u)
        state = {"key": state["key"], "nbr": nbr, "used": frozenset(used),
                 "open": frozenset(open_)}
        if all(beats(state["key"], nbr[u]) for u in open_):
            slot = min(j for j in range(1, ctx.max_degree + 2) if j not in used)
            return state, {u: ("slot", slot) for u in open_}, Halt(slot)
        return state, {}, None


def slot_allocate(g: WeightedGraph, bids, coloring: ColorAssignment,
                  model: ExecutionModel = LOCAL):
    """Returns ``(slot per node, trace)``; slots are 1-based."""
    inputs = [(bids[v], coloring[v]) for v in range(g.node_count)]
    return run(GreedySlots(), g, inputs, model)


@dataclass(frozen=True)
class ThresholdTable:
    """``(slot, smallest bid reaching it)`` pairs, worst slot first."""

    entries: tuple[tuple[int, int], ...]

    def position(self, slot: int) -> int:
        for j, (c, _) in enumerate(self.entries):
            if c == slot:
                return j
        raise KeyError(slot)


def slot_thresholds(g: WeightedGraph, bids, coloring: ColorAssignment, v: int,
                    model: ExecutionModel = LOCAL, allocate=None) -> ThresholdTable:
    """Scan ``v``'s bid over ``0..B`` and record where its slot improves."""
    if allocate is None:
        allocate = lambda b: slot_allocate(g, b, coloring, model)[0]
    entries: list[tuple[int, int]] = []
    for x in range(g.weight_bound + 1):
        b = list(bids)
        b[v] = x
        slot = allocate(tuple(b))[v]
        if not entries:
            entries.append((slot, x))
        elif slot > entries[-1][0]:
            raise MonotonicityError(v, entries[-1][1], x)
        elif slot < entries[-1][0]:
            entries.append((slot, x))
    return ThresholdTable(tuple(entries))


def slot_payment(table: ThresholdTable, assigned_slot: int, rates: Sequence) -> Fraction:
    """``-sum_k (rate(c_k) - rate(c_{k-1})) * b*_k`` up to the assigned slot."""
    try:
        j = table.position(assigned_slot)
    except KeyError:
        raise RuntimeError(f"slot {assigned_slot} missing from threshold table") from None
    total = Fraction(0)
    prev = Fraction(0)
    for c, threshold in table.entries[:j + 1]:
        r = rate_of(rates, c)
        total += (r - prev) * threshold
        prev = r
    return -total


def slot_value(weights, assignment, rates) -> Fraction:
    return sum((rate_of(rates, s) * weights[v] for v, s in enumerate(assignment)),
               Fraction(0))


def slot_verify_ratio(g: WeightedGraph, weights, assignment, rates):
    """OPT <= alpha_1 (Delta+1) / sum(alpha) * ALG, exact; raises otherwise."""
    rates = pad_rates(rates, g)
    opt = opt_slot_backtrack(g, weights, rates)
    alg = slot_value(weights, assignment, rates)
    head = rates[:g.max_degree + 1]
    if sum(head) == 0:
        return opt, ratio_of(opt, alg)
    factor = rates[0] * (g.max_degree + 1) / sum(head)
    if opt > factor * alg:
        raise BoundViolation(f"slot: OPT={opt} > {factor} * ALG={alg}")
    return opt, ratio_of(opt, alg)


def slot_mechanism(rates: Sequence) -> MechanismSpec:
    rates = validate_rates(rates)

    def allocate(g, bids, model=LOCAL):
        return slot_allocate(g, bids, color_graph(g, model)[0], model)

    def payments(g, bids, labels, model, allocate):
        coloring = color_graph(g, model)[0]
        pays = []
        for v in range(g.node_count):
            table = slot_thresholds(g, bids, coloring, v, model,
                                    allocate=lambda b: allocate(g, b, model)[0])
            pays.append(slot_payment(table, labels[v], rates))
        _, alloc = allocate(g, bids, model)
        return pays, RoundTrace(alloc.rounds, 2 * len(g.edges) * alloc.rounds, 0)

    return MechanismSpec(
        name="slot", objective=Objective.MAX, allocate=allocate,
        selected=lambda label: True,
        utility=lambda label, w: rate_of(rates, label) * w,
        setup=lambda g, model=LOCAL: color_graph(g, model)[1],
        payments=payments)
