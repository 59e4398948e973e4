"""Multigraph edge-coloring laboratory."""

from .bounds import guarantee_classifier, main3_lower_bound
from .coloring import EdgeColoring, is_proper, kempe_chain_at, switch_chain, switch_outside, validate_proper
from .ett import (ETT, build_ett, build_split_tail, is_stable, measure_sett, mp_search, verify_r1,
                  verify_r2)
from .multigraph import Multigraph, emit_graph, fat_cycle, fat_triangle, parse_graph
from .oracles import (criticality_check, density, exact_chromatic_index, make_k_triple,
                      near_perfect_decomposition)
from .tashkinov import TreeSeq, build_maximal_tashkinov, closure_report

__all__ = [
    "ETT", "EdgeColoring", "Multigraph", "TreeSeq", "build_ett", "build_maximal_tashkinov",
    "build_split_tail", "closure_report", "criticality_check", "density", "emit_graph",
    "exact_chromatic_index", "fat_cycle", "fat_triangle", "guarantee_classifier", "is_proper",
    "is_stable", "kempe_chain_at", "main3_lower_bound", "make_k_triple", "measure_sett", "mp_search",
    "near_perfect_decomposition", "parse_graph", "switch_chain", "switch_outside", "validate_proper",
    "verify_r1", "verify_r2",
]
