"""Fault-tolerant detection systems on finite graphs and the king's grid."""

from .detection import (
    DetectorSet,
    Verdict,
    dom_count,
    is_k_distinguishing,
    locating_code,
    partial_share,
    share,
    verify,
    verify_by_deletion,
)
from .graph import Graph, Kind, graph_from_edge_list, king_torus
from .periodic import (
    PeriodicPattern,
    builtin_patterns,
    density,
    lift_to_torus,
    pattern_search,
    verify_infinite,
)
from .share_bound import (
    certified_max_share,
    classify_high_share,
    enumerate_patches,
    lemma_bound,
)
from .solver import SolveRequest, branch_and_bound_min, brute_force_min

__version__ = "0.1.0"
