"""
Selling an independent set
==========================

Three bidders sit on a path.  Neighbours cannot both win, and each winner
pays the smallest bid that would still have won.
"""

from locmech import mwis_mechanism, run_mechanism
from locmech.graph import WeightedGraph
from locmech.myerson import total_utility

g = WeightedGraph.from_edges(3, [(0, 1), (1, 2)], weights=[1, 5, 1], weight_bound=5)
mech = mwis_mechanism()

res = run_mechanism(mech, g, g.weights)
print("winners :", [v for v, x in enumerate(res.allocation) if x])
print("payments:", res.payments)
print("rounds  :", res.trace.rounds)

# The middle bidder values the item at 5.  Try every other bid it could send
# and compare the utility it would end up with.
print("\nbid  utility of node 1 (true value 5)")
for bid in range(6):
    out = run_mechanism(mech, g, (1, bid, 1))
    print(f"{bid:3}  {total_utility(mech, out.allocation[1], 5, out.payments[1])}")

# Bidding anything from 2 upwards gives the same utility; lower bids lose.
# That flat region above the critical price is what makes honesty safe.
