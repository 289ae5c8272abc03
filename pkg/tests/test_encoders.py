import dataclasses

import numpy as np
import pytest

from semqg import Edge, NodeType, SemanticNode, Span, build_srl_graph
from semqg.checks import toy_graph
from semqg.encoders import (
    GraphIndex,
    att_ggnn_step,
    create_encoder_params,
    create_graph_params,
    encode_document,
    encode_graph,
    fuse,
    init_nodes,
    node_dim,
)
from semqg.errors import ConfigError, EncodingError
from semqg.graph import make_graph
from semqg.numerics import ParamStore, Tensor, backward, sum as t_sum
from semqg.qgen.data import prepare_examples, vocabulary_for
from semqg.qgen.config import TrainConfig
from semqg.synthdata import make_corpus
from semqg.vocab import build_vocabulary

CFG = TrainConfig(word_dim=3, enc_hidden=2, dec_hidden=4, K=2, graph_format="srl")


def _setup(doc):
    vocab = build_vocabulary([[t.text for s in doc.sentences for t in s]])
    store = ParamStore(3)
    create_encoder_params(store, len(vocab), CFG.word_dim, CFG.enc_hidden)
    return vocab, store


def _doc():
    return make_corpus(1)[0][1]


def test_encode_document_shapes():
    doc = _doc()
    vocab, store = _setup(doc)
    enc = encode_document(doc, vocab, store, CFG.enc_hidden)
    l = sum(len(s) for s in doc.sentences)
    assert enc.X.shape == (l, 2 * CFG.enc_hidden)
    assert enc.d_doc.shape == (2 * CFG.enc_hidden,)
    assert enc.length == l
    assert enc.sentence_offsets == (0, len(doc.sentences[0]))


def test_encode_single_token_document():
    from semqg.annotations import AnnotatedDocument, Token

    doc = AnnotatedDocument(
        sentences=((Token("hello", "UH", 0, 0),),),
        srl=((),),
        dep=(None,),
        coref=(),
        answer="hello",
    )
    vocab, store = _setup(doc)
    enc = encode_document(doc, vocab, store, CFG.enc_hidden)
    assert enc.X.shape == (1, 2 * CFG.enc_hidden)
    # d_doc is [last forward ; first backward] = the only row
    assert np.array_equal(enc.d_doc.data, enc.X.data[0])


def test_encode_empty_document_errors():
    from semqg.annotations import AnnotatedDocument

    doc = AnnotatedDocument(sentences=(), srl=(), dep=(), coref=(), answer="x")
    vocab = build_vocabulary([["x"]])
    store = ParamStore(0)
    create_encoder_params(store, len(vocab), CFG.word_dim, CFG.enc_hidden)
    with pytest.raises(EncodingError):
        encode_document(doc, vocab, store, CFG.enc_hidden)


def test_reversal_swaps_directions():
    """Reversing the document swaps the roles of the two recurrences when the
    direction parameters are also swapped."""
    doc = _doc()
    vocab, store = _setup(doc)
    enc = encode_document(doc, vocab, store, CFG.enc_hidden)

    reversed_tokens = [t.text for s in doc.sentences for t in s][::-1]
    from semqg.annotations import AnnotatedDocument, Token

    rdoc = AnnotatedDocument(
        sentences=(tuple(Token(t, "NN", 0, i) for i, t in enumerate(reversed_tokens)),),
        srl=((),),
        dep=(None,),
        coref=(),
        answer="x",
    )
    swapped = ParamStore(3)
    create_encoder_params(swapped, len(vocab), CFG.word_dim, CFG.enc_hidden)
    for g in "zrc":
        for part in "wub":
            a = swapped[f"enc.fwd.{part}_{g}"]
            b = swapped[f"enc.bwd.{part}_{g}"]
            a.data, b.data = b.data.copy(), a.data.copy()
    renc = encode_document(rdoc, vocab, swapped, CFG.enc_hidden)
    h = CFG.enc_hidden
    # forward states over the reversed doc with swapped params equal the
    # original backward states, read in reverse
    assert np.allclose(renc.X.data[:, :h], enc.X.data[::-1, h:], atol=1e-12)
    assert np.allclose(renc.X.data[:, h:], enc.X.data[::-1, :h], atol=1e-12)


def _graph_setup(K=2):
    cfg = dataclasses.replace(CFG, K=K)
    examples = prepare_examples(make_corpus(1), cfg)
    ex = examples[0]
    vocab = vocabulary_for(examples, cfg)
    store = ParamStore(5)
    create_encoder_params(store, len(vocab), cfg.word_dim, cfg.enc_hidden)
    create_graph_params(store, ex.graph.edge_vocabulary, cfg.enc_hidden, K)
    enc = encode_document(ex.doc, vocab, store, cfg.enc_hidden)
    return cfg, ex, vocab, store, enc


def test_init_nodes_rows_and_normalization():
    cfg, ex, vocab, store, enc = _graph_setup()
    h0 = init_nodes(ex.graph, enc, store)
    assert h0.shape == (len(ex.graph.nodes), node_dim(cfg.enc_hidden))


def test_init_single_word_node_copies_context_row():
    cfg, ex, vocab, store, enc = _graph_setup()
    single = [n for n in ex.graph.nodes if n.span.end - n.span.start == 1][0]
    h0 = init_nodes(ex.graph, enc, store)
    off = enc.sentence_offsets[single.span.sentence_index]
    row = enc.X.data[off + single.span.start]
    assert np.allclose(h0.data[single.id][: 2 * cfg.enc_hidden], row, atol=0)


def test_init_equal_logits_average():
    # force the attention parameters to zero: every span position gets equal
    # weight, so the node embedding is the plain mean of its context rows
    cfg, ex, vocab, store, enc = _graph_setup()
    store["node_attn.w"].data[:] = 0.0
    store["node_attn.a"].data[:] = 0.0
    h0 = init_nodes(ex.graph, enc, store)
    node = [n for n in ex.graph.nodes if n.span.end - n.span.start > 1][0]
    off = enc.sentence_offsets[node.span.sentence_index]
    rows = enc.X.data[off + node.span.start : off + node.span.end]
    assert np.allclose(h0.data[node.id][: 2 * cfg.enc_hidden], rows.mean(axis=0), atol=1e-15)


def test_init_out_of_range_span_errors():
    cfg, ex, vocab, store, enc = _graph_setup()
    bad = make_graph(
        [SemanticNode(0, Span(1, 7, 30), ("x",), NodeType.VERB, "VB")], []
    )
    with pytest.raises(IndexError):
        init_nodes(bad, enc, store)


# -- att-ggnn -----------------------------------------------------------------


def _toy_states(seed=0, enc_hidden=2):
    g = toy_graph()
    store = ParamStore(seed)
    create_graph_params(store, ("REL_A", "REL_B", "REL_C"), enc_hidden, K=2)
    nd = node_dim(enc_hidden)
    rng = np.random.default_rng(seed)
    H = Tensor(rng.uniform(-1, 1, (len(g.nodes), nd)))
    return g, store, H, nd


def test_isolated_node_uses_zero_aggregates():
    g, store, H, nd = _toy_states()
    iso = SemanticNode(6, Span(0, 6, 7), ("iso",), NodeType.VERB, "VB")
    g2 = make_graph(list(g.nodes) + [iso], g.edges)
    H2 = Tensor(np.vstack([H.data, np.zeros((1, nd))]))
    out, _ = att_ggnn_step(H2, g2, store, layer=0)
    # isolated node's update equals gru(h, [0;0])
    from semqg.numerics import GruParams, concat, gru_cell, reshape, take, zeros

    h_iso = reshape(take(H2, [6]), (nd,))
    expected = gru_cell(concat([zeros(nd), zeros(nd)]), h_iso, GruParams.fetch(store, "ggnn.k0.gru"))
    assert np.allclose(out.data[6], expected.data, atol=0)


def test_single_neighbor_attention_is_one():
    g, store, H, nd = _toy_states()
    _, attn = att_ggnn_step(H, g, store, layer=0, collect_attention=True)
    # node 1 has union neighbors {0, 2}; node 5 has {3, 4}; rows sum to 1
    sums = attn.sum(axis=1)
    for i in range(6):
        assert abs(sums[i] - 1.0) < 1e-12


def test_attention_rows_normalized_per_direction():
    g, store, H, nd = _toy_states()
    _, attn = att_ggnn_step(
        H, g, store, layer=0, collect_attention=True, normalize_per_direction=True
    )
    index = GraphIndex.build(g)
    for i in range(6):
        expected = float(bool(index.out_edges[i])) + float(bool(index.in_edges[i]))
        assert abs(attn[i].sum() - expected) < 1e-12


def test_missing_edge_type_raises_config_error():
    g, store, H, nd = _toy_states()
    extra = make_graph(g.nodes, list(g.edges) + [Edge(0, 5, "UNSEEN")])
    with pytest.raises(ConfigError):
        att_ggnn_step(H, extra, store, layer=0)


def test_encode_graph_layer_counts():
    g, store, H, nd = _toy_states()
    states, _ = encode_graph(H, g, store, K=2)
    assert states.K == 2
    assert len(states.layers) == 3
    states0, _ = encode_graph(H, g, store, K=0)
    assert len(states0.layers) == 1
    assert states0.final is H


def test_node_permutation_equivariance_exact():
    """Relabeling node ids permutes every layer exactly (graph kept to max two
    union neighbors per node so float summation order cannot change)."""
    enc_hidden = 2
    nd = node_dim(enc_hidden)
    nodes = [
        SemanticNode(i, Span(0, i, i + 1), (f"w{i}",), NodeType.VERB, "VB")
        for i in range(5)
    ]
    edges = [
        Edge(0, 1, "REL_A"),
        Edge(1, 2, "REL_B"),
        Edge(2, 3, "REL_A"),
        Edge(3, 4, "REL_B"),
    ]
    g = make_graph(nodes, edges)
    store = ParamStore(1)
    create_graph_params(store, ("REL_A", "REL_B"), enc_hidden, K=2)
    rng = np.random.default_rng(4)
    H = rng.uniform(-1, 1, (5, nd))
    states, _ = encode_graph(Tensor(H.copy()), g, store, K=2)

    perm = [3, 0, 4, 2, 1]  # new id of old node i
    pnodes = [
        SemanticNode(perm[n.id], n.span, n.text, n.node_type, n.pos) for n in nodes
    ]
    pnodes.sort(key=lambda n: n.id)
    pedges = [Edge(perm[e.src], perm[e.dst], e.type) for e in edges]
    pg = make_graph(pnodes, pedges)
    PH = np.zeros_like(H)
    for old, new in enumerate(perm):
        PH[new] = H[old]
    pstates, _ = encode_graph(Tensor(PH), pg, store, K=2)
    for layer, player in zip(states.layers, pstates.layers):
        for old, new in enumerate(perm):
            assert np.array_equal(layer.data[old], player.data[new])


def test_ggnn_gradients_flow_to_h0():
    g, store, H, nd = _toy_states()
    h0 = store.parameter("h0", H.shape)
    h0.data[:] = H.data
    states, _ = encode_graph(h0, g, store, K=2)
    backward(t_sum(states.final))
    assert h0.grad is not None and np.any(h0.grad != 0)


# -- fuse -----------------------------------------------------------------------


def test_fuse_width_and_node_selection():
    cfg, ex, vocab, store, enc = _graph_setup()
    h0 = init_nodes(ex.graph, enc, store)
    states, _ = encode_graph(h0, ex.graph, store, K=cfg.K)
    E = fuse(enc, states, ex.graph)
    nd = node_dim(cfg.enc_hidden)
    assert E.shape == (enc.length, 2 * cfg.enc_hidden + nd)
    # a word inside exactly one node gets that node's final row
    node = ex.graph.nodes[0]
    off = enc.sentence_offsets[node.span.sentence_index]
    # find a word covered only by this node
    covered = {}
    for n in ex.graph.nodes:
        o = enc.sentence_offsets[n.span.sentence_index]
        for gi in range(o + n.span.start, o + n.span.end):
            covered.setdefault(gi, []).append(n)
    only = next(gi for gi, ns in covered.items() if len(ns) == 1)
    expected = states.final.data[covered[only][0].id]
    assert np.array_equal(E.data[only][2 * cfg.enc_hidden :], expected)


def test_fuse_smallest_granularity_wins():
    """With nested spans the fewest-token covering node supplies the state."""
    cfg, ex, vocab, store, enc = _graph_setup()
    big = SemanticNode(0, Span(0, 0, 5), tuple("abcde"), NodeType.ARGUMENT, "NN")
    small = SemanticNode(1, Span(0, 1, 3), ("b", "c"), NodeType.ARGUMENT, "NN")
    g = make_graph([big, small], [Edge(0, 1, "ARG_TO_VERB")])
    create_graph_params(store, g.edge_vocabulary, cfg.enc_hidden, cfg.K)
    h0 = init_nodes(g, enc, store)
    states, _ = encode_graph(h0, g, store, K=0)
    E = fuse(enc, states, g)
    assert np.array_equal(E.data[2][2 * cfg.enc_hidden :], states.final.data[1])
    assert np.array_equal(E.data[0][2 * cfg.enc_hidden :], states.final.data[0])


def test_fuse_uncovered_word_near_zero():
    cfg, ex, vocab, store, enc = _graph_setup()
    lone = make_graph(
        [SemanticNode(0, Span(0, 0, 1), (ex.src_tokens[0],), NodeType.ARGUMENT, "NN")], []
    )
    h0 = init_nodes(lone, enc, store)
    states, _ = encode_graph(h0, lone, store, K=0)
    E = fuse(enc, states, lone)
    tail = E.data[1][2 * cfg.enc_hidden :]
    assert np.max(np.abs(tail)) <= 1e-8
