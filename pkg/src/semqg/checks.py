"""Finite-difference verification targets for every learned component.

Each check builds a deterministic scalar objective from stored parameters and
reports the maximum relative error between tape gradients and central
differences. The CLI ``gradcheck`` command and the acceptance suite both call
into this module.
"""

from __future__ import annotations

import numpy as np

from .annotations import Span
from .encoders import GraphIndex, att_ggnn_step, create_graph_params, node_dim
from .graph import Edge, NodeType, SemanticGraph, SemanticNode, make_graph
from .numerics import (
    GruParams,
    ParamStore,
    Tensor,
    add,
    concat,
    dot,
    exp,
    finite_difference_check,
    gru_cell,
    leaky_relu,
    log,
    matmul,
    maximum,
    mean,
    minimum,
    mul,
    neg,
    reshape,
    sigmoid,
    softmax,
    split,
    sub,
    sum as t_sum,
    take,
    tanh,
    transpose,
)
from .qgen.config import TrainConfig
from .qgen.data import edge_vocabulary_for, prepare_examples, vocabulary_for
from .qgen.model import QGModel
from .synthdata import make_corpus

PRIMITIVE_TOLERANCE = 1e-6
MODEL_TOLERANCE = 1e-4
DEFAULT_EPS = 1e-5


def _fd(f, store, eps=DEFAULT_EPS, coords=32, seed=0):
    return finite_difference_check(f, store, eps=eps, coords_per_param=coords, rng=np.random.default_rng(seed))


def check_primitives(seed: int = 0) -> float:
    """Every tensor primitive against central differences on small shapes."""
    rng = np.random.default_rng(seed)

    def fresh(shape):
        store = ParamStore(seed)
        p = store.parameter("x", shape)
        p.data[:] = rng.uniform(-1.0, 1.0, shape)
        return store

    worst = 0.0

    def run(f, store):
        nonlocal worst
        worst = max(worst, _fd(f, store, seed=seed))

    y_const = Tensor(rng.uniform(0.5, 1.5, (3, 4)))
    m_const = Tensor(rng.uniform(-1.0, 1.0, (4, 3)))
    v_const = Tensor(rng.uniform(-1.0, 1.0, (4,)))
    r3 = Tensor(rng.uniform(-1.0, 1.0, (3,)))
    r34 = Tensor(rng.uniform(-1.0, 1.0, (3, 4)))

    run(lambda s: t_sum(add(s["x"], y_const)), fresh((3, 4)))
    run(lambda s: t_sum(sub(s["x"], y_const)), fresh((3, 4)))
    run(lambda s: t_sum(mul(s["x"], y_const)), fresh((3, 4)))
    run(lambda s: t_sum(neg(s["x"])), fresh((3, 4)))
    run(lambda s: t_sum(matmul(s["x"], m_const)), fresh((3, 4)))
    run(lambda s: t_sum(matmul(s["x"], v_const)), fresh((3, 4)))
    run(lambda s: dot(reshape(s["x"], (12,)), reshape(s["x"], (12,))), fresh((3, 4)))
    run(lambda s: t_sum(transpose(s["x"])), fresh((3, 4)))
    run(lambda s: t_sum(mul(transpose(s["x"]), m_const)), fresh((3, 4)))
    run(lambda s: t_sum(concat([s["x"], s["x"]], axis=1)), fresh((3, 4)))
    run(lambda s: t_sum(mul(split(s["x"], [2, 2], axis=1)[0], split(s["x"], [2, 2], axis=1)[1])), fresh((3, 4)))
    run(lambda s: t_sum(mul(softmax(s["x"], axis=1), y_const)), fresh((3, 4)))
    run(lambda s: t_sum(mul(sigmoid(s["x"]), y_const)), fresh((3, 4)))
    run(lambda s: t_sum(mul(leaky_relu(s["x"]), y_const)), fresh((3, 4)))
    run(lambda s: t_sum(mul(tanh(s["x"]), y_const)), fresh((3, 4)))
    run(lambda s: t_sum(exp(s["x"])), fresh((3, 4)))
    run(lambda s: t_sum(log(add(mul(s["x"], s["x"]), Tensor(np.full((3, 4), 0.5))))), fresh((3, 4)))
    run(lambda s: dot(mean(s["x"], axis=1), r3), fresh((3, 4)))
    run(lambda s: t_sum(mul(take(s["x"], [0, 2, 2], axis=0), r34)), fresh((3, 4)))
    run(lambda s: t_sum(minimum(s["x"], y_const)), fresh((3, 4)))
    run(lambda s: t_sum(maximum(s["x"], neg(y_const))), fresh((3, 4)))
    run(lambda s: mean(s["x"]), fresh((3, 4)))
    return worst


def check_gru(seed: int = 0) -> float:
    store = ParamStore(seed)
    p = GruParams.create(store, "gru", 5, 4)
    del p
    rng = np.random.default_rng(seed + 1)
    x = Tensor(rng.uniform(-1, 1, 5))
    h0 = store.parameter("h0", (4,))
    h0.data[:] = rng.uniform(-1, 1, 4)
    w = Tensor(rng.uniform(-1, 1, 4))

    def f(s):
        params = GruParams.fetch(s, "gru")
        h = gru_cell(x, s["h0"], params)
        h = gru_cell(x, h, params)
        return dot(h, w)

    return _fd(f, store, seed=seed)


def toy_graph() -> SemanticGraph:
    """Six nodes, three edge types, mixed in/out degrees and one isolate-ish tail."""
    nodes = [
        SemanticNode(i, Span(0, i, i + 1), (f"w{i}",), NodeType.VERB, "VB")
        for i in range(6)
    ]
    edges = [
        Edge(0, 1, "REL_A"),
        Edge(1, 2, "REL_B"),
        Edge(2, 0, "REL_C"),
        Edge(0, 3, "REL_B"),
        Edge(3, 4, "REL_A"),
        Edge(4, 5, "REL_C"),
        Edge(5, 3, "REL_B"),
        Edge(2, 4, "REL_A"),
    ]
    return make_graph(nodes, edges)


def check_ggnn_step(seed: int = 0, enc_hidden: int = 2) -> float:
    g = toy_graph()
    store = ParamStore(seed)
    create_graph_params(store, ("REL_A", "REL_B", "REL_C"), enc_hidden, K=1)
    nd = node_dim(enc_hidden)
    h0 = store.parameter("h0", (len(g.nodes), nd))
    rng = np.random.default_rng(seed + 2)
    h0.data[:] = rng.uniform(-1, 1, h0.data.shape)
    w = Tensor(rng.uniform(-1, 1, nd))
    index = GraphIndex.build(g)

    def f(s):
        out, _ = att_ggnn_step(s["h0"], g, s, layer=0, index=index)
        return dot(mean(out, axis=0), w)

    return _fd(f, store, seed=seed)


def joint_fixture(seed: int = 0) -> tuple[QGModel, object]:
    cfg = TrainConfig(
        seed=seed,
        word_dim=3,
        enc_hidden=2,
        dec_hidden=4,
        K=1,
        graph_format="srl",
        dropout_encoder=0.0,
        dropout_decoder=0.0,
        dropout_attention=0.0,
    )
    examples = prepare_examples(make_corpus(1), cfg)
    vocab = vocabulary_for(examples, cfg)
    edge_vocab = edge_vocabulary_for(examples)
    model = QGModel(cfg, vocab, edge_vocab)
    return model, examples[0]


def check_joint(seed: int = 0) -> float:
    model, example = joint_fixture(seed)

    def f(store):
        assert store is model.store
        total, _ = model.joint_loss(example, training=False)
        return total

    return _fd(f, model.store, seed=seed)


ALL_CHECKS = {
    "primitives": (check_primitives, PRIMITIVE_TOLERANCE),
    "gru": (check_gru, MODEL_TOLERANCE),
    "encoder": (check_ggnn_step, MODEL_TOLERANCE),
    "joint": (check_joint, MODEL_TOLERANCE),
}
