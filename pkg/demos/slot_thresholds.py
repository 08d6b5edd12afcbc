"""
Slots with several thresholds
=============================

Two neighbours compete for slot 1 (rate 10) and slot 2 (rate 4).  A bidder's
payment adds up the rate gains it unlocks at each threshold bid.
"""

from locmech import run_mechanism, slot_mechanism
from locmech.coloring import ColorAssignment
from locmech.graph import WeightedGraph
from locmech.myerson import total_utility
from locmech.slot import slot_payment, slot_thresholds

rates = (10, 4)
g = WeightedGraph.from_edges(2, [(0, 1)], weights=[5, 3], weight_bound=9)
colors = ColorAssignment((0, 1), 2)

for v in range(2):
    table = slot_thresholds(g, g.weights, colors, v)
    print(f"node {v}: (slot, smallest bid reaching it) = {list(table.entries)}")

# Node 0 reaches slot 2 at bid 0 and slot 1 at bid 3, so it pays
# (4 - 0) * 0 + (10 - 4) * 3 = 18.
table = slot_thresholds(g, g.weights, colors, 0)
print("payment of node 0:", slot_payment(table, 1, rates))

mech = slot_mechanism(rates)
print("\nbid  slot  utility of node 0 (true value 5)")
for bid in range(10):
    res = run_mechanism(mech, g, (bid, 3))
    u = total_utility(mech, res.allocation[0], 5, res.payments[0])
    print(f"{bid:3}  {res.allocation[0]:4}  {u}")
