"""Parallel k-truss decomposition (PKT) with serial baselines and brute-force oracles."""
from .graph_core import (
    CsrGraph,
    EdgeListError,
    GraphStats,
    GraphTooLarge,
    TrussGraph,
    build_truss_graph,
    canonicalize,
    from_pairs,
    load_graph,
    read_edge_list,
    reorder,
    stats,
)
from .kcore import CorenessResult, coreness_order, kcore_parallel, kcore_serial
from .triangle import OracleTooLarge, support_am4, support_ros, triangle_count, triangle_oracle
from .truss_parallel import SubLevelTrace, pkt, process_sublevel, scan
from .truss_serial import TrussnessResult, ktruss_subgraphs, truss_oracle, truss_wc

__version__ = "0.1.0"

__all__ = [
    "CsrGraph", "CorenessResult", "EdgeListError", "GraphStats", "GraphTooLarge",
    "OracleTooLarge", "SubLevelTrace", "TrussGraph", "TrussnessResult",
    "build_truss_graph", "canonicalize", "coreness_order", "from_pairs",
    "kcore_parallel", "kcore_serial", "ktruss_subgraphs", "load_graph", "pkt",
    "process_sublevel", "read_edge_list", "reorder", "scan", "stats",
    "support_am4", "support_ros", "triangle_count", "triangle_oracle",
    "truss_oracle", "truss_wc",
]
