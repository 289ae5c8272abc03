"""Build a semantic graph from per-sentence predicate-argument tuples.

For every tuple the builder first links each element to already-existing
similar nodes (bidirectional SIMILAR edges), then adds the tuple's own nodes,
then the structural edges argument->verb and verb->modifier. Linking happens
*before* the tuple's nodes are registered, so elements of one tuple never
SIMILAR-link to each other; this order sensitivity is deliberate and the
all-pairs closure (:func:`semqg.graph.add_similarity_links`) is always a
superset of the edges produced here.

Elements within a tuple are processed as: arguments in annotation order, the
verb, then modifiers. A role label starting with ``ARGM`` marks a modifier no
matter which list it came from. Elements whose exact span already exists as a
node are deduplicated onto that node (which keeps its original type).
"""

from __future__ import annotations

import warnings

from ..annotations import AnnotatedDocument, Span
from ..errors import SemqgWarning
from ..graph import (
    ARG_TO_VERB,
    SIMILAR,
    VERB_TO_MOD,
    Edge,
    NodeType,
    SemanticGraph,
    SemanticNode,
    is_similar,
    make_graph,
    similarity_key,
)


def _span_text(doc: AnnotatedDocument, span: Span) -> tuple[str, ...]:
    toks = doc.sentences[span.sentence_index][span.start : span.end]
    return tuple(t.text.lower() for t in toks)


def _head_pos(doc: AnnotatedDocument, span: Span) -> str:
    # no parse information for SRL spans: take the last token's tag, the
    # usual head position for English noun phrases
    return doc.sentences[span.sentence_index][span.end - 1].pos


def build_srl_graph(doc: AnnotatedDocument) -> SemanticGraph:
    nodes: list[SemanticNode] = []
    keys: list[tuple[str, ...]] = []  # similarity keys, aligned with nodes
    by_span: dict[tuple[int, int, int], int] = {}
    edges: set[Edge] = set()

    def node_for(span: Span, node_type: NodeType) -> int:
        sk = (span.sentence_index, span.start, span.end)
        if sk in by_span:
            return by_span[sk]
        nid = len(nodes)
        text = _span_text(doc, span)
        nodes.append(
            SemanticNode(nid, span, text, node_type, _head_pos(doc, span))
        )
        keys.append(similarity_key(text))
        by_span[sk] = nid
        return nid

    saw_tuple = False
    for tuples in doc.srl:
        for t in tuples:
            saw_tuple = True
            combined = list(t.arguments) + list(t.modifiers)
            args = [sp for role, sp in combined if not role.startswith("ARGM")]
            mods = [sp for role, sp in combined if role.startswith("ARGM")]
            elements = (
                [(sp, NodeType.ARGUMENT) for sp in args]
                + [(t.verb, NodeType.VERB)]
                + [(sp, NodeType.MODIFIER) for sp in mods]
            )

            # UPDATE_LINKS against the nodes existing before this tuple
            existing = len(nodes)
            pending: list[tuple[Span, int]] = []
            for span, _ in elements:
                key = similarity_key(_span_text(doc, span))
                if not key:
                    continue
                sk = (span.sentence_index, span.start, span.end)
                for i in range(existing):
                    if (
                        nodes[i].span.sentence_index,
                        nodes[i].span.start,
                        nodes[i].span.end,
                    ) == sk:
                        continue  # dedup target, not a distinct node
                    if keys[i] and is_similar(key, keys[i]):
                        pending.append((span, i))

            ids = {}
            for span, node_type in elements:
                sk = (span.sentence_index, span.start, span.end)
                ids[sk] = node_for(span, node_type)
            for span, other in pending:
                nid = ids[(span.sentence_index, span.start, span.end)]
                edges.add(Edge(nid, other, SIMILAR))
                edges.add(Edge(other, nid, SIMILAR))

            verb_id = ids[(t.verb.sentence_index, t.verb.start, t.verb.end)]
            for sp in args:
                edges.add(Edge(ids[(sp.sentence_index, sp.start, sp.end)], verb_id, ARG_TO_VERB))
            for sp in mods:
                edges.add(Edge(verb_id, ids[(sp.sentence_index, sp.start, sp.end)], VERB_TO_MOD))

    if not saw_tuple:
        warnings.warn("document has no SRL tuples; graph is empty", SemqgWarning, stacklevel=2)
    return make_graph(nodes, edges)
