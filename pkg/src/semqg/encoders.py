"""Document encoder, node initialization, graph encoder, feature fusion.

The document is encoded by a bidirectional GRU over the flattened token
sequence. Each graph node is initialized from an attention-weighted sum of its
span's context embeddings plus POS and answer-tag feature embeddings (32-D
each). The graph encoder runs K state transitions with untied parameters: per
edge type there is one transformation matrix, messages are weighted by an
attention coefficient shared between a node's incoming and outgoing
aggregates, and a GRU folds both aggregates into the next state.

All functions take the :class:`~semqg.numerics.ParamStore` explicitly;
parameter names are created by ``create_*_params`` so checkpoints enumerate
every weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annotations import AnnotatedDocument
from .errors import ConfigError, EncodingError
from .graph import SemanticGraph
from .numerics import (
    GruParams,
    ParamStore,
    Tensor,
    add,
    concat,
    dot,
    gru_cell,
    leaky_relu,
    matmul,
    mul,
    reshape,
    softmax,
    split,
    sum as t_sum,
    take,
    transpose,
)
from .vocab import POS_VOCABULARY, Vocabulary, pos_id

POS_EMB_DIM = 32
ANSWER_EMB_DIM = 32
FUSE_EPSILON = 1e-8


@dataclass
class DocEncoding:
    X: Tensor  # (l, 2*enc_hidden) context embedding per word
    d_doc: Tensor  # (2*enc_hidden,) document vector [fwd_last; bwd_first]
    length: int
    sentence_offsets: tuple[int, ...]  # global index of each sentence's first token


@dataclass
class GraphStates:
    layers: list[Tensor]  # K+1 tensors of shape (N, node_dim)

    @property
    def K(self) -> int:
        return len(self.layers) - 1

    @property
    def final(self) -> Tensor:
        return self.layers[-1]


def node_dim(enc_hidden: int) -> int:
    return 2 * enc_hidden + POS_EMB_DIM + ANSWER_EMB_DIM


def dropout(t: Tensor, rate: float, rng: np.random.Generator | None) -> Tensor:
    """Inverted-scaling Bernoulli mask; identity when rate is 0 or rng absent."""
    if rate <= 0.0 or rng is None:
        return t
    mask = (rng.random(t.shape) >= rate) / (1.0 - rate)
    return mul(t, Tensor(mask))


def create_encoder_params(store: ParamStore, vocab_size: int, word_dim: int, enc_hidden: int):
    store.parameter("emb.word", (vocab_size, word_dim))
    GruParams.create(store, "enc.fwd", word_dim, enc_hidden)
    GruParams.create(store, "enc.bwd", word_dim, enc_hidden)
    d = 2 * enc_hidden
    store.parameter("node_attn.w", (d, d))
    store.parameter("node_attn.a", (2 * d,))
    store.parameter("emb.pos", (len(POS_VOCABULARY), POS_EMB_DIM))
    store.parameter("emb.answer", (2, ANSWER_EMB_DIM))


def create_graph_params(store: ParamStore, edge_vocab, enc_hidden: int, K: int):
    nd = node_dim(enc_hidden)
    for k in range(K):
        for label in edge_vocab:
            store.parameter(f"ggnn.k{k}.rel.{label}", (nd, nd))
        store.parameter(f"ggnn.k{k}.attn.w", (nd, nd))
        store.parameter(f"ggnn.k{k}.attn.a", (2 * nd,))
        GruParams.create(store, f"ggnn.k{k}.gru", 2 * nd, nd)


def encode_document(
    doc: AnnotatedDocument,
    vocab: Vocabulary,
    store: ParamStore,
    enc_hidden: int,
    dropout_rate: float = 0.0,
    rng: np.random.Generator | None = None,
) -> DocEncoding:
    """Bi-GRU over the flattened lowercased token sequence."""
    tokens = [t.text.lower() for sent in doc.sentences for t in sent]
    if not tokens:
        raise EncodingError("cannot encode an empty document")
    offsets = []
    acc = 0
    for sent in doc.sentences:
        offsets.append(acc)
        acc += len(sent)

    emb = take(store["emb.word"], vocab.ids(tokens))  # (l, wd)
    wd = emb.shape[1]
    fwd_p = GruParams.fetch(store, "enc.fwd")
    bwd_p = GruParams.fetch(store, "enc.bwd")

    l = len(tokens)
    fwd_states = []
    h = Tensor(np.zeros(enc_hidden))
    for i in range(l):
        x = reshape(take(emb, [i]), (wd,))
        h = gru_cell(x, h, fwd_p)
        fwd_states.append(h)
    bwd_states: list[Tensor | None] = [None] * l
    h = Tensor(np.zeros(enc_hidden))
    for i in range(l - 1, -1, -1):
        x = reshape(take(emb, [i]), (wd,))
        h = gru_cell(x, h, bwd_p)
        bwd_states[i] = h

    rows = [
        reshape(concat([fwd_states[i], bwd_states[i]]), (1, 2 * enc_hidden))
        for i in range(l)
    ]
    X = concat(rows, axis=0)
    X = dropout(X, dropout_rate, rng)
    d_doc = concat([fwd_states[-1], bwd_states[0]])
    return DocEncoding(X=X, d_doc=d_doc, length=l, sentence_offsets=tuple(offsets))


def _pair_attention_logits(query_proj: Tensor, key_projs: Tensor, a: Tensor) -> Tensor:
    """Pair scores leaky_relu(a^T [W q ; W k_j]) for every row k_j.

    The rectifier (slope 0.2, as in the graph-attention line of work) is what
    keeps the query half of ``a`` meaningful: a purely linear score would add
    the same constant to every logit and cancel inside the softmax.
    """
    na = query_proj.shape[0]
    a1, a2 = split(a, [na, na])
    left = dot(a1, query_proj)  # scalar ()
    rights = matmul(key_projs, a2)  # (k,)
    return leaky_relu(add(reshape(left, (1,)), rights))


def init_nodes(
    g: SemanticGraph,
    enc: DocEncoding,
    store: ParamStore,
) -> Tensor:
    """Initial node states: word-to-node attention plus POS/answer features."""
    w = store["node_attn.w"]
    a = store["node_attn.a"]
    d_proj = matmul(w, enc.d_doc)
    rows = []
    for n in g.nodes:
        off = enc.sentence_offsets[n.span.sentence_index]
        lo, hi = off + n.span.start, off + n.span.end
        if hi > enc.length or lo < 0 or lo >= hi:
            raise IndexError(f"node {n.id} span maps outside the document encoding")
        xv = take(enc.X, list(range(lo, hi)))  # (k, 2d)
        proj = matmul(xv, transpose(w))  # (k, 2d)
        beta = softmax(_pair_attention_logits(d_proj, proj, a))
        h0 = matmul(transpose(xv), beta)  # (2d,)
        p = reshape(take(store["emb.pos"], [pos_id(n.pos)]), (POS_EMB_DIM,))
        ans = reshape(take(store["emb.answer"], [1 if n.answer_flag else 0]), (ANSWER_EMB_DIM,))
        rows.append(reshape(concat([h0, p, ans]), (1, -1)))
    if not rows:
        raise EncodingError("cannot initialize an empty graph")
    return concat(rows, axis=0)


@dataclass
class GraphIndex:
    """Static adjacency view of a graph, reused across layers and FD calls."""

    out_edges: list[list[tuple[int, str]]]  # per node: (neighbor, edge type)
    in_edges: list[list[tuple[int, str]]]
    union: list[list[int]]  # sorted distinct incoming+outgoing neighbors

    @classmethod
    def build(cls, g: SemanticGraph) -> "GraphIndex":
        n = len(g.nodes)
        out_edges = [[] for _ in range(n)]
        in_edges = [[] for _ in range(n)]
        for e in g.edges:  # edges are sorted, so these lists are deterministic
            out_edges[e.src].append((e.dst, e.type))
            in_edges[e.dst].append((e.src, e.type))
        union = [
            sorted({j for j, _ in out_edges[i]} | {j for j, _ in in_edges[i]})
            for i in range(n)
        ]
        return cls(out_edges, in_edges, union)


def att_ggnn_step(
    H: Tensor,
    g: SemanticGraph,
    store: ParamStore,
    layer: int,
    index: GraphIndex | None = None,
    normalize_per_direction: bool = False,
    collect_attention: bool = False,
) -> tuple[Tensor, np.ndarray | None]:
    """One state transition; returns the next layer and (optionally) the
    attention coefficients as a dense (N, N) array for analysis."""
    if index is None:
        index = GraphIndex.build(g)
    n, nd = H.shape
    prefix = f"ggnn.k{layer}"
    for label in {e.type for e in g.edges}:
        if f"{prefix}.rel.{label}" not in store:
            raise ConfigError(f"edge type {label!r} missing from the encoder configuration")
    wa = store[f"{prefix}.attn.w"]
    att_a = store[f"{prefix}.attn.a"]
    gru_p = GruParams.fetch(store, f"{prefix}.gru")

    transformed = {
        label: matmul(H, transpose(store[f"{prefix}.rel.{label}"]))
        for label in sorted({e.type for e in g.edges})
    }
    wa_h = matmul(H, transpose(wa))  # (N, na)
    na = wa_h.shape[1]
    a1, a2 = split(att_a, [na, na])
    left = matmul(wa_h, a1)  # (N,)
    right = matmul(wa_h, a2)  # (N,)

    attn_matrix = np.zeros((n, n)) if collect_attention else None
    zero_agg = Tensor(np.zeros(nd))
    next_rows = []
    for i in range(n):

        def coefficients(neighbors: list[int]) -> dict[int, Tensor]:
            """Softmax of leaky_relu(a^T [W h_i ; W h_j]) over the neighbor set."""
            logits = leaky_relu(
                add(reshape(take(left, [i]), (1,)), take(right, neighbors))
            )
            alpha = softmax(logits)
            if attn_matrix is not None:
                for pos, j in enumerate(neighbors):
                    attn_matrix[i, j] += float(alpha.data[pos])
            return {j: reshape(take(alpha, [pos]), (1,)) for pos, j in enumerate(neighbors)}

        if normalize_per_direction:
            out_set = sorted({j for j, _ in index.out_edges[i]})
            in_set = sorted({j for j, _ in index.in_edges[i]})
            out_coeffs = coefficients(out_set) if out_set else {}
            in_coeffs = coefficients(in_set) if in_set else {}
        else:
            union = index.union[i]
            out_coeffs = in_coeffs = coefficients(union) if union else {}

        def aggregate(edge_list, coeffs: dict[int, Tensor]) -> Tensor:
            if not edge_list:
                return zero_agg
            msgs = []
            for j, label in sorted(edge_list):
                m = take(transformed[label], [j])  # (1, nd)
                msgs.append(mul(m, reshape(coeffs[j], (1, 1))))
            if len(msgs) == 1:
                return reshape(msgs[0], (nd,))
            return t_sum(concat(msgs, axis=0), axis=0)

        out_agg = aggregate(index.out_edges[i], out_coeffs)
        in_agg = aggregate(index.in_edges[i], in_coeffs)
        h_i = reshape(take(H, [i]), (nd,))
        h_next = gru_cell(concat([out_agg, in_agg]), h_i, gru_p)
        next_rows.append(reshape(h_next, (1, nd)))
    return concat(next_rows, axis=0), attn_matrix


def encode_graph(
    H0: Tensor,
    g: SemanticGraph,
    store: ParamStore,
    K: int,
    index: GraphIndex | None = None,
    normalize_per_direction: bool = False,
    collect_attention: bool = False,
) -> tuple[GraphStates, list[np.ndarray]]:
    """K state transitions with untied per-layer parameters."""
    if index is None:
        index = GraphIndex.build(g)
    layers = [H0]
    attn = []
    h = H0
    for k in range(K):
        h, mat = att_ggnn_step(
            h,
            g,
            store,
            layer=k,
            index=index,
            normalize_per_direction=normalize_per_direction,
            collect_attention=collect_attention,
        )
        layers.append(h)
        if collect_attention and mat is not None:
            attn.append(mat)
    return GraphStates(layers), attn


def smallest_covering_nodes(
    length: int, sentence_offsets, g: SemanticGraph
) -> list[int | None]:
    """Per flattened word position, the id of the covering node with the
    fewest tokens (ties: earliest node id), or None when uncovered."""
    best: list[tuple[int, int] | None] = [None] * length
    for node in g.nodes:
        off = sentence_offsets[node.span.sentence_index]
        width = node.span.end - node.span.start
        for gi in range(off + node.span.start, off + node.span.end):
            cand = (width, node.id)
            if best[gi] is None or cand < best[gi]:
                best[gi] = cand
    return [b[1] if b is not None else None for b in best]


def fuse(enc: DocEncoding, states: GraphStates, g: SemanticGraph) -> Tensor:
    """Per word: concatenate its context embedding with the state of the
    smallest covering node (ties: earliest node id); uncovered words get a
    near-zero vector instead."""
    H = states.final
    nd = H.shape[1]
    match = smallest_covering_nodes(enc.length, enc.sentence_offsets, g)
    eps_row = Tensor(np.full((1, nd), FUSE_EPSILON))
    rows = []
    for gi in range(enc.length):
        x = take(enc.X, [gi])  # (1, 2d)
        if match[gi] is None:
            rows.append(concat([x, eps_row], axis=1))
        else:
            rows.append(concat([x, take(H, [match[gi]])], axis=1))
    return concat(rows, axis=0)
