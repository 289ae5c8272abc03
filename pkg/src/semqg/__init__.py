"""Semantic graph construction and graph-attentive question generation."""

from .annotations import (
    AnnotatedDocument,
    CorefCluster,
    DepEdge,
    DepTree,
    Span,
    SrlTuple,
    Token,
    Violation,
    parse_annotations,
    resolve_coreference,
    validate,
)
from .builders import build_dp_graph, build_srl_graph
from .graph import (
    Edge,
    GraphStats,
    NodeType,
    SemanticGraph,
    SemanticNode,
    add_similarity_links,
    is_similar,
    label_relevant_nodes,
    stats,
    tag_answer_nodes,
    to_dot,
    to_json,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedDocument", "CorefCluster", "DepEdge", "DepTree", "Span",
    "SrlTuple", "Token", "Violation", "parse_annotations",
    "resolve_coreference", "validate",
    "build_dp_graph", "build_srl_graph",
    "Edge", "GraphStats", "NodeType", "SemanticGraph", "SemanticNode",
    "add_similarity_links", "is_similar", "label_relevant_nodes", "stats",
    "tag_answer_nodes", "to_dot", "to_json",
    "__version__",
]
