"""
Local-ratio vertex cover
========================

Edges are processed one colour class per round.  Both endpoints of an edge
pay ``min`` of their remaining budgets; whoever runs dry joins the cover.
"""

from locmech import color_line_graph, mwvc_allocate, mwvc_mechanism, run_mechanism
from locmech.graph import WeightedGraph
from locmech.mwvc import mwvc_verify_ratio

g = WeightedGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)],
                             weights=[3, 1, 4, 2], weight_bound=6)
edge_colors, _ = color_line_graph(g)
cover, charges, residual, trace = mwvc_allocate(g, g.weights, edge_colors)

for eid, (u, v) in enumerate(g.edges):
    print(f"edge {u}-{v}  class {edge_colors[eid]}  charge {charges[eid]}")
print("residuals:", residual)
print("cover    :", sorted(cover))

# The charges are a feasible dual, so they bound the optimum from below and
# the cover costs at most twice their sum.
opt, ratio = mwvc_verify_ratio(g, g.weights, cover, charges)
print(f"cost {sum(g.weights[v] for v in cover)}, optimum {opt}, ratio {ratio}")

# Running time depends on the edge colouring only, never on the weights.
mech = mwvc_mechanism()
for w in ([1, 1, 1, 1], [6, 0, 6, 0], [2, 5, 3, 6]):
    print(w, "->", mech.allocate(g.with_weights(w), w)[1].rounds, "rounds")

res = run_mechanism(mech, g, g.weights)
print("payments (cover members are reimbursed their critical bid):", res.payments)
