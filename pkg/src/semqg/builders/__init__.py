from .srl import build_srl_graph
from .dp import build_dp_graph, identify_node_types, prune_tree, merge_nodes

__all__ = [
    "build_srl_graph",
    "build_dp_graph",
    "identify_node_types",
    "prune_tree",
    "merge_nodes",
]
