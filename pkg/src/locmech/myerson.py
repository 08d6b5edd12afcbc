"""Critical prices, payments, utilities and bid discretisation.

All payments and utilities are exact (``int`` or ``Fraction``).  Critical
prices live on the bid grid ``0..W`` of the graph the mechanism runs on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Sequence

from .graph import Objective, WeightedGraph, check_bids
from .sim import LOCAL, ExecutionModel, RoundTrace

Number = int | Fraction


class MonotonicityError(RuntimeError):
    """The allocation selected ``node`` at one bid and dropped it at a better one."""

    def __init__(self, node: int, selected_bid, unselected_bid):
        super().__init__(f"node {node}: selected at bid {selected_bid} but not "
                         f"at bid {unselected_bid}")
        self.node = node
        self.selected_bid = selected_bid
        self.unselected_bid = unselected_bid


@dataclass(frozen=True)
class MechanismSpec:
    """A mechanism built around a monotone allocation rule.

    ``allocate(g, bids, model)`` returns ``(labels, trace)``.  ``setup`` gives
    the trace of the weight-independent preprocessing (tie-break colouring).
    ``prices`` optionally replaces generic re-simulation with a dedicated
    protocol; ``payments(g, bids, labels, model, allocate)`` replaces the
    binary payment rule altogether (multi-threshold mechanisms).
    """

    name: str
    objective: Objective
    allocate: Callable[..., tuple[list, RoundTrace]]
    selected: Callable[[Any], bool]
    utility: Callable[[Any, Number], Number]
    setup: Callable[..., RoundTrace] = lambda g, model: RoundTrace()
    prices: Callable | None = None
    payments: Callable | None = None

    def cached(self) -> "MechanismSpec":
        """Copy whose allocation is memoised on (structure, grid, bids, model)."""
        memo: dict = {}
        inner = self.allocate

        def allocate(g, bids, model=LOCAL):
            key = (g.structure, g.weight_bound, tuple(bids), model)
            if key not in memo:
                memo[key] = inner(g, bids, model)
            return memo[key]

        return replace(self, allocate=allocate)


@dataclass
class MechanismResult:
    mechanism: str
    allocation: list
    payments: list
    objective_value: Number
    trace: RoundTrace
    prices: dict = field(default_factory=dict)
    phases: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"mechanism": self.mechanism,
                "allocation": [_jsonable(x) for x in self.allocation],
                "payments": [_jsonable(p) for p in self.payments],
                "objective_value": _jsonable(self.objective_value),
                **self.trace.to_json()}


def _jsonable(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _with_bid(bids: Sequence, v: int, x) -> tuple:
    b = list(bids)
    b[v] = x
    return tuple(b)


def selected_at(mech: MechanismSpec, g: WeightedGraph, bids, v: int, x,
                model: ExecutionModel = LOCAL) -> bool:
    labels, _ = mech.allocate(g, _with_bid(bids, v, x), model)
    return bool(mech.selected(labels[v]))


def critical_price(mech: MechanismSpec, g: WeightedGraph, bids, v: int,
                   model: ExecutionModel = LOCAL) -> int | None:
    """Threshold grid bid of ``v`` found by binary search.

    Maximisation: smallest bid that selects ``v``.  Minimisation: largest
    bid that selects ``v``.  ``None`` when no grid bid selects ``v``.
    """
    W = g.weight_bound
    sel = lambda x: selected_at(mech, g, bids, v, x, model)
    if mech.objective == Objective.MAX:
        if not sel(W):
            if sel(bids[v]):
                raise MonotonicityError(v, bids[v], W)
            return None
        lo, hi = 0, W
        while lo < hi:
            mid = (lo + hi) // 2
            if sel(mid):
                hi = mid
            else:
                lo = mid + 1
        price = lo
        if sel(bids[v]) != (bids[v] >= price):
            good, bad = (bids[v], price) if bids[v] < price else (price, bids[v])
            raise MonotonicityError(v, good, bad)
        return price
    if not sel(0):
        if sel(bids[v]):
            raise MonotonicityError(v, bids[v], 0)
        return None
    lo, hi = 0, W
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if sel(mid):
            lo = mid
        else:
            hi = mid - 1
    price = lo
    if sel(bids[v]) != (bids[v] <= price):
        good, bad = (bids[v], price) if bids[v] > price else (price, bids[v])
        raise MonotonicityError(v, good, bad)
    return price


def critical_price_scan(mech: MechanismSpec, g: WeightedGraph, bids, v: int,
                        model: ExecutionModel = LOCAL) -> int | None:
    """Linear-scan twin of :func:`critical_price` that checks every grid bid."""
    flags = [selected_at(mech, g, bids, v, x, model)
             for x in range(g.weight_bound + 1)]
    if mech.objective == Objective.MIN:
        flags = flags[::-1]
    # flags is now ordered worst bid -> best bid; must be 0..0 1..1
    first = next((i for i, f in enumerate(flags) if f), None)
    if first is None:
        return None
    for i in range(first, len(flags)):
        if not flags[i]:
            sel_bid, unsel_bid = first, i
            if mech.objective == Objective.MIN:
                sel_bid, unsel_bid = g.weight_bound - first, g.weight_bound - i
            raise MonotonicityError(v, sel_bid, unsel_bid)
    return first if mech.objective == Objective.MAX else g.weight_bound - first


def payments_from_prices(objective: Objective, selected: Sequence[bool],
                         prices: dict) -> list:
    out = []
    for v, s in enumerate(selected):
        if not s:
            out.append(0)
            continue
        if prices.get(v) is None:
            raise RuntimeError(f"no critical price for selected node {v}")
        out.append(-prices[v] if objective == Objective.MAX else prices[v])
    return out


def total_utility(mech: MechanismSpec, label, true_weight: Number,
                  payment: Number) -> Number:
    return mech.utility(label, true_weight) + payment


def run_mechanism(mech: MechanismSpec, g: WeightedGraph, bids,
                  model: ExecutionModel = LOCAL,
                  true_weights: Sequence | None = None) -> MechanismResult:
    """Allocate once, price the selected nodes and assemble utilities.

    Without a dedicated price protocol, prices come from re-simulating the
    allocation; that phase is charged the allocation's round count (a node
    gathers its T-hop view and simulates locally).
    """
    bids = check_bids(g, bids)
    true_weights = bids if true_weights is None else tuple(true_weights)
    setup = mech.setup(g, model)
    labels, alloc = mech.allocate(g, bids, model)
    if mech.payments is not None:
        payments, ptrace = mech.payments(g, bids, labels, model, mech.allocate)
        prices = {}
    else:
        sel = [bool(mech.selected(x)) for x in labels]
        if mech.prices is not None:
            prices, ptrace = mech.prices(g, bids, labels, model)
        else:
            prices = {v: critical_price(mech, g, bids, v, model)
                      for v in range(g.node_count) if sel[v]}
            ptrace = RoundTrace(alloc.rounds, 2 * len(g.edges) * alloc.rounds, 0)
        payments = payments_from_prices(mech.objective, sel, prices)
    value = sum((mech.utility(labels[v], true_weights[v])
                 for v in range(g.node_count)), 0)
    trace = setup.then(alloc).then(ptrace)
    return MechanismResult(mech.name, list(labels), payments, value, trace,
                           prices, {"setup": setup, "allocation": alloc,
                                    "payments": ptrace})


# --- discretisation ----------------------------------------------------------

@dataclass(frozen=True)
class DiscretizationConfig:
    epsilon: Fraction
    weight_cap: Fraction

    def __post_init__(self):
        eps, cap = Fraction(self.epsilon), Fraction(self.weight_cap)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "weight_cap", cap)
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        k = cap / eps
        if k.denominator != 1 or k < 1:
            raise ValueError(f"W/epsilon = {k} is not a positive integer")

    @property
    def steps(self) -> int:
        return int(self.weight_cap / self.epsilon)

    def value(self, index: int) -> Fraction:
        return index * self.epsilon


def discretize(real_bids: Sequence, cfg: DiscretizationConfig,
               objective: Objective) -> tuple[int, ...]:
    """Grid indices: round down for maximisation, up for minimisation."""
    out = []
    for v, b in enumerate(real_bids):
        b = Fraction(b)
        if not 0 <= b <= cfg.weight_cap:
            raise ValueError(f"bid {b} of node {v} outside [0, {cfg.weight_cap}]")
        q = b / cfg.epsilon
        idx = math.floor(q) if objective == Objective.MAX else math.ceil(q)
        out.append(int(idx))
    return tuple(out)


def run_discretized(mech: MechanismSpec, g: WeightedGraph, real_bids,
                    cfg: DiscretizationConfig, model: ExecutionModel = LOCAL,
                    true_weights: Sequence | None = None) -> MechanismResult:
    """Discretise real bids, run on the grid, report payments in real units."""
    idx = discretize(real_bids, cfg, mech.objective)
    grid = g.with_weights(idx, cfg.steps)
    truth = real_bids if true_weights is None else true_weights
    res = run_mechanism(mech, grid, idx, model)
    eps = cfg.epsilon
    res.payments = [p * eps for p in res.payments]
    res.prices = {v: None if p is None else p * eps for v, p in res.prices.items()}
    res.objective_value = sum((mech.utility(res.allocation[v], Fraction(truth[v]))
                               for v in range(g.node_count)), Fraction(0))
    return res
