"""
Real-valued bids on a grid
==========================

Real bids are rounded onto ``{0, eps, 2 eps, ...}`` (down for maximisation,
up for minimisation) and the integer mechanism runs on grid indices.
Truthfulness survives the rounding; solution quality may not.
"""

from fractions import Fraction as F

from locmech import DiscretizationConfig, mwis_mechanism, run_discretized
from locmech.graph import WeightedGraph
from locmech.oracle import opt_mwis

g = WeightedGraph.from_edges(3, [(0, 1), (1, 2)], weight_bound=2)
truth = (F(1, 3), F(7, 4), F(1))
cfg = DiscretizationConfig(epsilon=F(1, 2), weight_cap=2)

res = run_discretized(mwis_mechanism(), g, truth, cfg)
print("allocation:", res.allocation)
print("payments  :", [str(p) for p in res.payments])
print("value     :", res.objective_value, "of optimum", opt_mwis(g, truth))

# With weights below one grid step the rounding can erase the difference
# between two bidders entirely.  Both of these round down to 0, the tie goes
# to the smaller colour, and the light node wins.
edge = WeightedGraph.from_edges(2, [(0, 1)], weight_bound=3)
tiny = (F(1, 16), F(7, 16))
res = run_discretized(mwis_mechanism(), edge, tiny, DiscretizationConfig(F(1, 2), 3))
alg = sum(t for t, x in zip(tiny, res.allocation) if x)
print(f"\nALG {alg} vs OPT {opt_mwis(edge, tiny)}: ratio {opt_mwis(edge, tiny) / alg}, "
      f"while 1/(1 - eps) = 2")
