"""Build a semantic graph from dependency parse trees.

Per sentence: type every token (verb / noun / attribute groups), prune
unimportant constituents, merge consecutive attribute chains, then union the
refined trees and connect similar nodes across trees with SIMILAR edges.

Tree edges keep their dependency relation labels; labels outside the most
frequent ``max_edge_labels`` in the document collapse into ``CHILD`` so the
edge vocabulary (and with it the graph encoder's parameter count) stays
bounded.
"""

from __future__ import annotations

import copy
import warnings
from collections import Counter
from dataclasses import dataclass, field

from ..annotations import AnnotatedDocument, DepTree, Span
from ..errors import SemqgWarning
from ..graph import (
    CHILD,
    Edge,
    NodeType,
    SemanticGraph,
    SemanticNode,
    add_similarity_links,
    make_graph,
)
from ..text import PTB_TAGS, PUNCT_TAGS

DEFAULT_PRUNE_RELATIONS = frozenset({"punct", "det"})
_KNOWN_TAGS = frozenset(PTB_TAGS)


@dataclass
class TreeNode:
    """Mutable tree node used during refinement; spans are half-open."""

    start: int
    end: int
    head_token: int
    pos: str
    group: NodeType
    relation: str | None
    children: list["TreeNode"] = field(default_factory=list)


def _group_for(pos: str) -> tuple[NodeType, bool]:
    """POS tag -> node group. Second element: tag was unknown."""
    if pos.startswith("VB"):
        return NodeType.VERB, False
    if pos.startswith("NN") or pos.startswith("PRP") or pos == "CD":
        return NodeType.NOUN, False
    if pos in _KNOWN_TAGS:
        return NodeType.ATTRIBUTE, False
    return NodeType.ATTRIBUTE, True


def identify_node_types(tree: DepTree, pos_tags) -> TreeNode:
    """Lift a dependency tree into typed single-token nodes."""
    nodes = {}
    for t, pos in enumerate(pos_tags):
        group, unknown = _group_for(pos)
        if unknown:
            warnings.warn(f"unknown POS tag {pos!r}; treated as attribute", SemqgWarning, stacklevel=2)
        nodes[t] = TreeNode(t, t + 1, t, pos, group, None)
    for e in tree.edges:
        nodes[e.dependent].relation = e.relation
        nodes[e.head].children.append(nodes[e.dependent])
    for n in nodes.values():
        n.children.sort(key=lambda c: c.start)
    return nodes[tree.root]


def _prunable(node: TreeNode, prune_relations) -> bool:
    return node.pos in PUNCT_TAGS or (node.relation in prune_relations)


def prune_tree(root: TreeNode, prune_relations=DEFAULT_PRUNE_RELATIONS) -> TreeNode:
    """Remove prunable nodes top-down, re-attaching their children.

    A removed node's children keep their own relation labels and attach to the
    removed node's parent. The root is never pruned away silently: if it
    matches, its highest (shallowest, then leftmost) non-prunable descendant
    becomes the new root and adopts the remaining subtrees.
    """
    root = copy.deepcopy(root)

    def survivors(node: TreeNode, acc: list[TreeNode]):
        # children surviving under `node`, chains of prunable nodes collapsed
        for c in node.children:
            if _prunable(c, prune_relations):
                survivors(c, acc)
            else:
                acc.append(c)

    if _prunable(root, prune_relations):
        flat: list[tuple[int, TreeNode]] = []

        def collect(node: TreeNode, depth: int):
            for c in node.children:
                if _prunable(c, prune_relations):
                    collect(c, depth + 1)
                else:
                    flat.append((depth, c))

        collect(root, 0)
        if not flat:
            warnings.warn("every node is prunable; keeping the bare root", SemqgWarning, stacklevel=2)
            root.children = []
            return root
        flat.sort(key=lambda item: (item[0], item[1].start))
        new_root = flat[0][1]
        for _, other in flat[1:]:
            new_root.children.append(other)
        new_root.relation = None
        root = new_root

    def walk(node: TreeNode):
        acc: list[TreeNode] = []
        survivors(node, acc)
        node.children = sorted(acc, key=lambda c: c.start)
        for c in node.children:
            walk(c)

    walk(root)
    return root


def merge_nodes(root: TreeNode) -> TreeNode:
    """Merge attribute nodes with attribute children on adjacent spans.

    Repeats to a fixpoint, always taking the leftmost candidate pair, so the
    result is deterministic. The merged node keeps the parent's incoming edge,
    head token and POS, and inherits the child's children.
    """
    root = copy.deepcopy(root)

    def find_pair(node: TreeNode):
        best = None
        stack = [node]
        while stack:
            v = stack.pop()
            for c in v.children:
                if (
                    v.group == NodeType.ATTRIBUTE
                    and c.group == NodeType.ATTRIBUTE
                    and (v.end == c.start or c.end == v.start)
                ):
                    key = (min(v.start, c.start), max(v.start, c.start))
                    if best is None or key < best[0]:
                        best = (key, v, c)
                stack.extend(v.children)
        return best

    while True:
        found = find_pair(root)
        if found is None:
            return root
        _, v, c = found
        v.start = min(v.start, c.start)
        v.end = max(v.end, c.end)
        v.children = sorted(
            [x for x in v.children if x is not c] + c.children,
            key=lambda x: x.start,
        )


def build_dp_graph(
    doc: AnnotatedDocument,
    prune_relations=DEFAULT_PRUNE_RELATIONS,
    max_edge_labels: int = 20,
) -> SemanticGraph:
    refined: list[tuple[int, TreeNode]] = []
    for i, tree in enumerate(doc.dep):
        if tree is None or not doc.sentences[i]:
            warnings.warn(f"sentence {i} has no dependency tree; skipped", SemqgWarning, stacklevel=2)
            continue
        pos_tags = [t.pos for t in doc.sentences[i]]
        typed = identify_node_types(tree, pos_tags)
        typed = prune_tree(typed, frozenset(prune_relations))
        typed = merge_nodes(typed)
        refined.append((i, typed))

    nodes: list[SemanticNode] = []
    tree_edges: list[tuple[int, int, str]] = []
    for sent_idx, root in refined:
        ordered: list[TreeNode] = []
        stack = [root]
        while stack:
            n = stack.pop()
            ordered.append(n)
            stack.extend(n.children)
        ordered.sort(key=lambda n: n.start)
        local: dict[int, int] = {}
        for tn in ordered:
            nid = len(nodes)
            local[id(tn)] = nid
            toks = doc.sentences[sent_idx][tn.start : tn.end]
            nodes.append(
                SemanticNode(
                    nid,
                    Span(sent_idx, tn.start, tn.end),
                    tuple(t.text.lower() for t in toks),
                    tn.group,
                    tn.pos,
                )
            )
        stack = [root]
        while stack:
            n = stack.pop()
            for c in n.children:
                tree_edges.append((local[id(n)], local[id(c)], c.relation or CHILD))
                stack.append(c)

    counts = Counter(rel for _, _, rel in tree_edges)
    kept = {
        rel
        for rel, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:max_edge_labels]
    }
    edges = [
        Edge(src, dst, rel if rel in kept else CHILD) for src, dst, rel in tree_edges
    ]
    graph = make_graph(nodes, edges)
    return add_similarity_links(graph, family="dp")
