"""Truthful distributed mechanisms for graph optimisation problems.

Four mechanisms run as synchronous message-passing programs on the bidders'
own communication graph: greedy maximum-weight independent set, local-ratio
vertex cover, greedy dominating set and slot assignment.  Payments follow
from critical (threshold) bids, so truthful bidding is a dominant strategy.
"""

from .coloring import ColorAssignment, color_graph, color_line_graph, color_two_hop, is_proper
from .graph import (GraphFormatError, Objective, TieKey, WeightedGraph, beats,
                    format_graph, parse_graph, parse_rates, read_graph,
                    square_graph, line_graph, validate_graph)
from .mwds import mwds_allocate, mwds_allocate_nonadaptive, mwds_mechanism
from .mwis import mwis_allocate, mwis_mechanism, mwis_prices_congest
from .mwvc import mwvc_allocate, mwvc_mechanism
from .myerson import (DiscretizationConfig, MechanismResult, MechanismSpec,
                      MonotonicityError, critical_price, discretize,
                      run_discretized, run_mechanism)
from .oracle import (Corpus, check_monotone, check_truthful, default_corpus,
                     opt_mwds, opt_mwis, opt_mwvc, opt_slot, small_corpus)
from .sim import (LOCAL, CongestionError, ExecutionModel, NodeProgram,
                  NonTerminationError, RoundTrace, assert_congest, congest, run)
from .slot import slot_allocate, slot_mechanism, slot_thresholds

__all__ = [
    "ColorAssignment", "color_graph", "color_line_graph", "color_two_hop", "is_proper",
    "GraphFormatError", "Objective", "TieKey", "WeightedGraph", "beats",
    "format_graph", "parse_graph", "parse_rates", "read_graph", "square_graph",
    "line_graph", "validate_graph",
    "mwds_allocate", "mwds_allocate_nonadaptive", "mwds_mechanism",
    "mwis_allocate", "mwis_mechanism", "mwis_prices_congest",
    "mwvc_allocate", "mwvc_mechanism",
    "DiscretizationConfig", "MechanismResult", "MechanismSpec", "MonotonicityError",
    "critical_price", "discretize", "run_discretized", "run_mechanism",
    "Corpus", "check_monotone", "check_truthful", "default_corpus",
    "opt_mwds", "opt_mwis", "opt_mwvc", "opt_slot", "small_corpus",
    "LOCAL", "CongestionError", "ExecutionModel", "NodeProgram",
    "NonTerminationError", "RoundTrace", "assert_congest", "congest", "run",
    "slot_allocate", "slot_mechanism", "slot_thresholds",
]
