"""Acceptance suite: one test per criterion, each printing a PASS line with
its measured quantities. The training-based criteria pin their own seeds and
configurations; everything runs on a single CPU core with no network access.
"""

import dataclasses
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from semqg import build_dp_graph, build_srl_graph, is_similar, to_json
from semqg.builders.dp import DEFAULT_PRUNE_RELATIONS, _prunable, merge_nodes, prune_tree
from semqg.checks import (
    MODEL_TOLERANCE,
    PRIMITIVE_TOLERANCE,
    check_ggnn_step,
    check_gru,
    check_joint,
    check_primitives,
)
from semqg.graph import NodeType
from semqg.qgen import QGModel, TrainConfig, analyze_attention, bleu, train
from semqg.qgen.data import edge_vocabulary_for, prepare_examples, vocabulary_for
from semqg.synthdata import make_corpus

from conftest import golden_bytes
from fixture_table import DP_OPTIONS, FIXTURE_NAMES
from oracles import brute_similar

WORDS = [
    "airport", "hoonah", "pago", "member", "movement", "leading", "old",
    "town", "the", "of", "a", "self-determination", "mine", ",",
]


def _report(name, detail):
    print(f"[PASS] {name}: {detail}")


def test_similarity_oracle_500_pairs():
    rng = np.random.default_rng(7)
    t0 = time.time()
    checked = 0
    for _ in range(500):
        la, lb = rng.integers(1, 7, size=2)
        a = [WORDS[i] for i in rng.integers(0, len(WORDS), la)]
        b = [WORDS[i] for i in rng.integers(0, len(WORDS), lb)]
        assert is_similar(a, b) == brute_similar(a, b), (a, b)
        checked += 1
    dt = time.time() - t0
    assert dt < 1.0
    _report("similarity oracle", f"{checked} random pairs exact-match brute force in {dt:.2f}s")


def test_builder_oracle_golden_byte_match(fixture_docs):
    t0 = time.time()
    for name in FIXTURE_NAMES:
        doc = fixture_docs[name]
        assert to_json(build_srl_graph(doc)) == golden_bytes(f"{name}.srl.json"), name
        assert to_json(build_dp_graph(doc, **DP_OPTIONS.get(name, {}))) == golden_bytes(
            f"{name}.dp.json"
        ), name
    dt = time.time() - t0
    assert dt < 1.0
    # the appendix triple is among them
    import json

    g = json.loads(golden_bytes("f05_appendix_triple.dp.json"))
    texts = {tuple(n["text"]): n["id"] for n in g["nodes"]}
    member = texts[("a", "leading", "member")]
    movement = texts[("the", "native", "american", "self-determination", "movement")]
    assert {"src": member, "dst": movement, "type": "pobj"} in g["edges"]
    dt = time.time() - t0
    _report("builder oracle", f"20 golden graphs byte-matched (incl. pobj triple) in {dt:.2f}s")


def test_tree_invariants_200_random_trees():
    from semqg.annotations import DepEdge, DepTree
    from semqg.builders.dp import identify_node_types

    rng = np.random.default_rng(11)
    pos_choices = ["NN", "VBD", "JJ", "RB", "IN", "DT", ",", ".", "CD", "JJ", "JJ"]
    rels = ["nsubj", "dobj", "amod", "punct", "det", "prep", "advmod", "amod"]
    t0 = time.time()
    import warnings

    for trial in range(200):
        n = int(rng.integers(1, 12))
        pos = [pos_choices[i] for i in rng.integers(0, len(pos_choices), n)]
        edges = [
            DepEdge(int(rng.integers(0, i)), i, rels[int(rng.integers(0, len(rels)))])
            for i in range(1, n)
        ]
        tree = DepTree(0, 0, tuple(edges))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            typed = identify_node_types(tree, pos)
            pruned = prune_tree(typed)
            merged = merge_nodes(pruned)

        # pruned output is a tree with no prunable node (bare-root fallback aside)
        seen = set()
        stack = [pruned]
        count = 0
        while stack:
            node = stack.pop()
            assert id(node) not in seen  # acyclic, single parent
            seen.add(id(node))
            count += 1
            stack.extend(node.children)
            if node is not pruned:
                assert not _prunable(node, DEFAULT_PRUNE_RELATIONS), trial

        # merged output has no adjacent attribute parent/child pair
        stack = [merged]
        while stack:
            node = stack.pop()
            for c in node.children:
                both = node.group == NodeType.ATTRIBUTE and c.group == NodeType.ATTRIBUTE
                adjacent = node.end == c.start or c.end == node.start
                assert not (both and adjacent), trial
            stack.extend(node.children)
    dt = time.time() - t0
    assert dt < 5.0
    _report("tree invariants", f"200 random trees pruned+merged cleanly in {dt:.2f}s")


def test_gradient_suite():
    t0 = time.time()
    prim = check_primitives(0)
    assert prim < PRIMITIVE_TOLERANCE, prim
    gru = check_gru(0)
    assert gru < MODEL_TOLERANCE, gru
    ggnn = check_ggnn_step(0)
    assert ggnn < MODEL_TOLERANCE, ggnn
    joint = check_joint(0)
    assert joint < MODEL_TOLERANCE, joint
    dt = time.time() - t0
    assert dt < 60.0
    _report(
        "gradient suite",
        f"primitives={prim:.2e} (<1e-6), gru={gru:.2e}, att-ggnn step={ggnn:.2e}, "
        f"joint loss={joint:.2e} (<1e-4), eps=1e-5, {dt:.1f}s",
    )


def test_normalization_suite():
    cfg = TrainConfig(
        word_dim=4, enc_hidden=3, dec_hidden=5, K=1, graph_format="srl", seed=0
    )
    t0 = time.time()
    checked = 0
    for i in range(100):
        examples = prepare_examples(make_corpus((i % 10) + 1)[-1:], cfg)
        ex = examples[0]
        vocab = vocabulary_for(examples, cfg)
        model = QGModel(
            dataclasses.replace(cfg, seed=i), vocab, edge_vocabulary_for(examples)
        )
        enc, states, _, ctx = model.encode(ex.doc, ex.graph, collect_attention=True)
        # Eq. 2 softmax per node: beta sums to 1 -> the h0 rows are convex sums;
        # verified through the attention collection of one graph step plus the
        # decoder distributions below
        from semqg.encoders import att_ggnn_step

        _, attn = att_ggnn_step(
            states.layers[0], ex.graph, model.store, layer=0,
            index=model.graph_index(ex.graph), collect_attention=True,
        )
        for row, total in enumerate(attn.sum(axis=1)):
            if total:  # nodes with neighbors
                assert abs(total - 1.0) < 1e-12
                checked += 1
        state = model.decoder_init(ex.answer_tokens, len(ctx.src_tokens))
        out, state = model.decode_step(state, model.vocab.sos_id, ctx)
        for dist in (out.vocab_dist, out.attn, out.mixed_dist):
            assert abs(float(dist.data.sum()) - 1.0) < 1e-12
            assert np.all(dist.data >= 0.0)
            checked += 1
    dt = time.time() - t0
    assert dt < 5.0
    _report("normalization suite", f"{checked} distributions sum to 1 ± 1e-12 in {dt:.2f}s")


def test_init_nodes_beta_normalization():
    # the Eq. 2 softmax itself, probed directly: with zero attention
    # parameters every span position receives exactly 1/len weight
    cfg = TrainConfig(word_dim=4, enc_hidden=3, dec_hidden=5, K=0, graph_format="srl", seed=3)
    examples = prepare_examples(make_corpus(1), cfg)
    ex = examples[0]
    model = QGModel(cfg, vocabulary_for(examples, cfg), edge_vocabulary_for(examples))
    from semqg.encoders import encode_document, init_nodes

    enc = encode_document(ex.doc, model.vocab, model.store, cfg.enc_hidden)
    model.store["node_attn.w"].data[:] = 0.0
    model.store["node_attn.a"].data[:] = 0.0
    h0 = init_nodes(ex.graph, enc, model.store)
    for n in ex.graph.nodes:
        off = enc.sentence_offsets[n.span.sentence_index]
        rows = enc.X.data[off + n.span.start : off + n.span.end]
        assert np.allclose(h0.data[n.id][: 2 * cfg.enc_hidden], rows.mean(axis=0), atol=1e-14)
    _report("word-to-node attention", "uniform beta equals row mean for every node")


SMOKE_CFG = TrainConfig(
    seed=0,
    learning_rate=0.006,
    batch_size=10,
    max_epochs=30,
    word_dim=12,
    enc_hidden=8,
    dec_hidden=20,
    K=1,
    graph_format="dp",
    dropout_encoder=0.0,
    dropout_decoder=0.0,
    dropout_attention=0.0,
    early_stop_patience=1000,
    lr_decay_patience=1000,
)


def test_learning_smoke_50_examples_30_epochs():
    t0 = time.time()
    examples = prepare_examples(make_corpus(50), SMOKE_CFG)
    assert len(examples) == 50
    vocab = vocabulary_for(examples, SMOKE_CFG)
    model = QGModel(SMOKE_CFG, vocab, edge_vocabulary_for(examples))
    metrics = train(model, examples, examples)
    dt = time.time() - t0
    first, last = metrics[0], metrics[-1]
    assert last["train_loss"] < 0.5 * first["train_loss"], (first, last)
    flags = [n.relevant_flag for ex in examples for n in ex.graph.nodes]
    majority = max(sum(flags), len(flags) - sum(flags)) / len(flags)
    assert last["cs_accuracy"] > majority, (last["cs_accuracy"], majority)
    assert dt < 600.0
    _report(
        "learning smoke",
        f"loss {first['train_loss']:.3f} -> {last['train_loss']:.3f} "
        f"(x{last['train_loss'] / first['train_loss']:.3f} < 0.5), "
        f"cs_accuracy {last['cs_accuracy']:.3f} > majority {majority:.3f}, {dt:.0f}s",
    )


def test_memorize_and_recite_5_examples():
    cfg = dataclasses.replace(
        SMOKE_CFG, seed=1, learning_rate=0.01, batch_size=5, max_epochs=150
    )
    t0 = time.time()
    examples = prepare_examples(make_corpus(5), cfg)
    vocab = vocabulary_for(examples, cfg)
    model = QGModel(cfg, vocab, edge_vocabulary_for(examples))
    train(model, examples, examples)
    nlls = [model.joint_loss(ex)[1]["nll"] for ex in examples]
    assert max(nlls) < 0.15, nlls  # teacher-forced NLL is near zero
    scores = []
    for ex in examples:
        hyp = model.generate(ex.doc, ex.graph, ex.answer_tokens, max_len=20)
        assert hyp == ex.question_tokens, (hyp, ex.question_tokens)
        scores.append(bleu(hyp, [ex.question_tokens], 4))
    assert all(s == 100.0 for s in scores), scores
    dt = time.time() - t0
    assert dt < 300.0
    _report(
        "memorize-and-recite",
        f"5/5 gold questions reproduced exactly, BLEU-4 = 100.0 ± 0, "
        f"max NLL {max(nlls):.4f}, {dt:.0f}s",
    )


def test_attention_ratio_directional_property():
    """Joint training concentrates decoder attention on relevant nodes at
    least as much as single-task training (mean over 5 seeds). The paper's
    full-scale magnitudes (1.214 vs 1.067) are reference only."""

    def run(seed, lam):
        cfg = dataclasses.replace(
            SMOKE_CFG, seed=seed, max_epochs=10, lambda_content=lam
        )
        examples = prepare_examples(make_corpus(20), cfg)
        vocab = vocabulary_for(examples, cfg)
        model = QGModel(cfg, vocab, edge_vocabulary_for(examples))
        train(model, examples, examples)
        return analyze_attention(model, examples)["ratio"]

    t0 = time.time()
    joint = []
    single = []
    for seed in range(5):
        joint.append(run(seed, 0.5))
        single.append(run(seed, 0.0))
    dt = time.time() - t0
    mean_joint = float(np.mean(joint))
    mean_single = float(np.mean(single))
    assert mean_joint >= mean_single, (joint, single)
    assert dt < 1800.0
    _report(
        "attention ratio (joint vs single)",
        f"mean joint {mean_joint:.3f} >= mean single {mean_single:.3f} over 5 seeds "
        f"(paper reference: 1.214 vs 1.067), {dt:.0f}s",
    )


def test_corpus_sparsity_dp_vs_srl(fixture_docs):
    t0 = time.time()
    dp_tokens = dp_nodes = srl_tokens = srl_nodes = 0
    for name in FIXTURE_NAMES:
        doc = fixture_docs[name]
        dp = build_dp_graph(doc, **DP_OPTIONS.get(name, {}))
        srl = build_srl_graph(doc)
        dp_tokens += sum(len(n.text) for n in dp.nodes)
        dp_nodes += len(dp.nodes)
        srl_tokens += sum(len(n.text) for n in srl.nodes)
        srl_nodes += len(srl.nodes)
    dp_mean = Fraction(dp_tokens, dp_nodes)
    srl_mean = Fraction(srl_tokens, srl_nodes)
    dt = time.time() - t0
    assert dp_mean < srl_mean
    assert dt < 1.0
    _report(
        "corpus sparsity",
        f"DP mean tokens/node {float(dp_mean):.3f} < SRL {float(srl_mean):.3f} in {dt:.2f}s",
    )
