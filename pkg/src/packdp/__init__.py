"""Packing and partition of small patterns over tree decompositions.

Exact DP solvers for clique and general-pattern packings, an exhaustive
oracle, gadget constructions with relation verification, and reduction
generators that emit their path decompositions.
"""

from .clique_dp import solve_clique_packing, solve_clique_partition
from .graph import Graph, complete_graph, cycle_graph, make_graph, named_pattern, parse_gr
from .hpack_dp import solve_h_packing, solve_h_partition
from .oracle import exact_cover_feasible, max_packing_bruteforce, realized_relation, verify_gadget
from .treedec import heuristic_treedec, nice_from_graph, nicify, parse_td, validate

__all__ = [
    "Graph", "complete_graph", "cycle_graph", "make_graph", "named_pattern", "parse_gr",
    "heuristic_treedec", "nice_from_graph", "nicify", "parse_td", "validate",
    "solve_clique_packing", "solve_clique_partition", "solve_h_packing", "solve_h_partition",
    "exact_cover_feasible", "max_packing_bruteforce", "realized_relation", "verify_gadget",
]

__version__ = "0.1.0"
