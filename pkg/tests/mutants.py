"""Deliberately broken mechanism variants; each must be caught by a suite."""

from dataclasses import replace

from locmech.graph import ColorClashError, Objective, beats
from locmech.mwis import mwis_mechanism
from locmech.sim import RoundTrace


def larger_color_wins(a, b):
    if a.color == b.color:
        raise ColorClashError(f"keys {a} and {b} share colour {a.color}")
    return (a.value, a.color) > (b.value, b.color)


def lower_bid_wins(a, b):
    return beats(a, b, Objective.MIN)


def first_price():
    """Winners pay their own bid instead of the critical price."""

    def prices(g, bids, labels, model=None):
        return {v: bids[v] for v, x in enumerate(labels) if x}, RoundTrace()

    return replace(mwis_mechanism(), name="mwis-first-price", prices=prices)


def reversed_tie():
    return replace(mwis_mechanism(tie=larger_color_wins), name="mwis-reversed-tie")


def no_blocking_check():
    return replace(mwis_mechanism(check_blocking=False), name="mwis-no-blocking")


def anti_monotone():
    return replace(mwis_mechanism(tie=lower_bid_wins), name="mwis-lowest-bid")
