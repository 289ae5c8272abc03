"""Semantic graph data model, similarity predicate, tagging, stats and export.

Wire format (byte-stable for golden tests)::

    {"nodes": [{"id", "s", "start", "end", "text": [...], "type", "pos",
                "answer": bool, "relevant": bool|null}, ...],
     "edges": [{"src", "dst", "type"}, ...],
     "edge_vocab": [...]}

Node ids are assigned in build order (see the builders); edges are sorted by
``(src, dst, type)`` and the edge vocabulary is the sorted set of labels.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .annotations import Span
from .errors import LabelingError, SchemaError
from .text import content_tokens, contiguous_subsequence, simple_word_tokens

SIMILAR = "SIMILAR"
ARG_TO_VERB = "ARG_TO_VERB"
VERB_TO_MOD = "VERB_TO_MOD"
CHILD = "CHILD"


class NodeType(str, Enum):
    # SRL family
    ARGUMENT = "ARGUMENT"
    VERB = "VERB"
    MODIFIER = "MODIFIER"
    # DP family (VERB is shared)
    NOUN = "NOUN"
    ATTRIBUTE = "ATTRIBUTE"


SRL_FAMILY = frozenset({NodeType.ARGUMENT, NodeType.VERB, NodeType.MODIFIER})
DP_FAMILY = frozenset({NodeType.VERB, NodeType.NOUN, NodeType.ATTRIBUTE})


@dataclass(frozen=True)
class SemanticNode:
    id: int
    span: Span
    text: tuple[str, ...]  # lowercased tokens of the span
    node_type: NodeType
    pos: str  # head-word POS tag
    answer_flag: bool = False
    relevant_flag: bool | None = None


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    type: str


@dataclass(frozen=True)
class SemanticGraph:
    nodes: tuple[SemanticNode, ...]
    edges: tuple[Edge, ...]
    edge_vocabulary: tuple[str, ...]

    def node(self, node_id: int) -> SemanticNode:
        return self.nodes[node_id]


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    edge_count_by_type: dict[str, int]
    connected_components: int
    mean_tokens_per_node: Fraction


def make_graph(nodes: Sequence[SemanticNode], edges: Iterable[Edge]) -> SemanticGraph:
    """Canonicalize: dedup edges, sort them, derive the edge vocabulary."""
    unique = sorted(set(edges), key=lambda e: (e.src, e.dst, e.type))
    vocab = tuple(sorted({e.type for e in unique}))
    return SemanticGraph(tuple(nodes), tuple(unique), vocab)


def graph_family(g: SemanticGraph) -> str:
    """"srl" or "dp", derived from the node type variants in use."""
    types = {n.node_type for n in g.nodes}
    if types & {NodeType.ARGUMENT, NodeType.MODIFIER}:
        return "srl"
    if types & {NodeType.NOUN, NodeType.ATTRIBUTE}:
        return "dp"
    return "dp"


# ---------------------------------------------------------------------------
# similarity


def is_similar(a: Sequence[str], b: Sequence[str]) -> bool:
    """Three-rule token-span similarity.

    True iff (1) the spans are equal, (2) one is a contiguous subsequence of
    the other, or (3) the multiset overlap exceeds half the shorter length
    (strict, real-valued half). Symmetric and reflexive but *not* transitive.
    """
    ta, tb = tuple(a), tuple(b)
    if not ta or not tb:
        return False
    if ta == tb:
        return True
    if contiguous_subsequence(ta, tb) or contiguous_subsequence(tb, ta):
        return True
    overlap = sum((Counter(ta) & Counter(tb)).values())
    return overlap > min(len(ta), len(tb)) / 2


def similarity_key(text: Sequence[str]) -> tuple[str, ...]:
    """Tokens compared when linking nodes: punctuation and stopwords dropped.

    Without this, rule (3) would link every pair of spans sharing "the".
    """
    return content_tokens(text)


def nodes_similar(a: SemanticNode, b: SemanticNode) -> bool:
    ka, kb = similarity_key(a.text), similarity_key(b.text)
    return bool(ka) and bool(kb) and is_similar(ka, kb)


def add_similarity_links(g: SemanticGraph, family: str | None = None) -> SemanticGraph:
    """Add both directed SIMILAR edges for every similar node pair.

    DP graphs link only nodes from different parse trees (sentences); SRL
    graphs link any pair (closure of the builder's incremental rule).
    Idempotent: re-application leaves the edge set unchanged.
    """
    fam = family or graph_family(g)
    new_edges = set(g.edges)
    nodes = g.nodes
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            a, b = nodes[i], nodes[j]
            if fam == "dp" and a.span.sentence_index == b.span.sentence_index:
                continue
            if nodes_similar(a, b):
                new_edges.add(Edge(a.id, b.id, SIMILAR))
                new_edges.add(Edge(b.id, a.id, SIMILAR))
    return make_graph(nodes, new_edges)


# ---------------------------------------------------------------------------
# tagging


def tag_answer_nodes(g: SemanticGraph, answer: str) -> SemanticGraph:
    """Flag nodes sharing at least one non-stopword token with the answer."""
    answer_tokens = set(content_tokens(simple_word_tokens(answer)))
    nodes = tuple(
        replace(n, answer_flag=bool(answer_tokens & set(content_tokens(n.text))))
        for n in g.nodes
    )
    return SemanticGraph(nodes, g.edges, g.edge_vocabulary)


def label_relevant_nodes(g: SemanticGraph, gold_question: str | None) -> SemanticGraph:
    """Content-selection ground truth.

    A node is relevant iff (a) at least half of its non-stopword tokens appear
    in the lowercased question, or (b) it has a SIMILAR edge to a node in a
    different sentence (a bridge between evidence sentences).
    """
    if not gold_question:
        raise LabelingError("relevance labeling requires a gold question")
    q_tokens = set(simple_word_tokens(gold_question))
    bridges = set()
    for e in g.edges:
        if e.type == SIMILAR:
            a, b = g.node(e.src), g.node(e.dst)
            if a.span.sentence_index != b.span.sentence_index:
                bridges.add(e.src)
                bridges.add(e.dst)
    nodes = []
    for n in g.nodes:
        content = content_tokens(n.text)
        by_overlap = bool(content) and sum(t in q_tokens for t in content) >= len(content) / 2
        nodes.append(replace(n, relevant_flag=by_overlap or n.id in bridges))
    return SemanticGraph(tuple(nodes), g.edges, g.edge_vocabulary)


# ---------------------------------------------------------------------------
# export and stats


def to_json(g: SemanticGraph) -> bytes:
    obj = {
        "nodes": [
            {
                "id": n.id,
                "s": n.span.sentence_index,
                "start": n.span.start,
                "end": n.span.end,
                "text": list(n.text),
                "type": n.node_type.value,
                "pos": n.pos,
                "answer": n.answer_flag,
                "relevant": n.relevant_flag,
            }
            for n in g.nodes
        ],
        "edges": [{"src": e.src, "dst": e.dst, "type": e.type} for e in g.edges],
        "edge_vocab": list(g.edge_vocabulary),
    }
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def from_json(raw) -> SemanticGraph:
    if isinstance(raw, (bytes, bytearray)):
        raw = raw.decode("utf-8")
    obj = json.loads(raw)
    try:
        nodes = tuple(
            SemanticNode(
                id=n["id"],
                span=Span(n["s"], n["start"], n["end"]),
                text=tuple(n["text"]),
                node_type=NodeType(n["type"]),
                pos=n["pos"],
                answer_flag=n["answer"],
                relevant_flag=n["relevant"],
            )
            for n in obj["nodes"]
        )
        edges = tuple(Edge(e["src"], e["dst"], e["type"]) for e in obj["edges"])
        vocab = tuple(obj["edge_vocab"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(str(exc), "graph JSON missing field") from exc
    return SemanticGraph(nodes, edges, vocab)


_DOT_SHAPES = {
    NodeType.ARGUMENT: "box",
    NodeType.NOUN: "box",
    NodeType.VERB: "diamond",
    NodeType.MODIFIER: "ellipse",
    NodeType.ATTRIBUTE: "ellipse",
}


def to_dot(g: SemanticGraph) -> bytes:
    """Emit one digraph; node shapes encode types, output is stable-sorted."""
    lines = ["digraph semantic_graph {"]
    for n in sorted(g.nodes, key=lambda n: n.id):
        label = " ".join(n.text).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{n.id} [label="{label}" shape={_DOT_SHAPES[n.node_type]}];')
    for e in sorted(g.edges, key=lambda e: (e.src, e.dst, e.type)):
        lines.append(f'  n{e.src} -> n{e.dst} [label="{e.type}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def stats(g: SemanticGraph) -> GraphStats:
    by_type = Counter(e.type for e in g.edges)
    # connected components on the undirected view (BFS; tests cross-check
    # against a brute-force union-find oracle)
    neighbors: dict[int, set[int]] = {n.id: set() for n in g.nodes}
    for e in g.edges:
        neighbors[e.src].add(e.dst)
        neighbors[e.dst].add(e.src)
    seen: set[int] = set()
    components = 0
    for n in g.nodes:
        if n.id in seen:
            continue
        components += 1
        frontier = [n.id]
        seen.add(n.id)
        while frontier:
            cur = frontier.pop()
            for nxt in neighbors[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    total_tokens = sum(len(n.text) for n in g.nodes)
    mean = Fraction(total_tokens, len(g.nodes)) if g.nodes else Fraction(0)
    return GraphStats(
        node_count=len(g.nodes),
        edge_count=len(g.edges),
        edge_count_by_type=dict(sorted(by_type.items())),
        connected_components=components,
        mean_tokens_per_node=mean,
    )
