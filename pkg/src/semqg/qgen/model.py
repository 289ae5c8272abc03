"""Joint question-generation model: content selection head plus an
attention/copy/coverage decoder over the fused document representation.

The decoder is a GRU taking ``[emb(y_prev); context]`` as input. Attention over
the fused rows is additive, with the coverage vector fed in as an extra
feature (switchable). The copy gate mixes the vocabulary distribution with the
attention distribution scattered over source positions, so the step output is
one distribution over ``vocabulary + source positions``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..annotations import AnnotatedDocument
from ..encoders import (
    DocEncoding,
    GraphIndex,
    GraphStates,
    create_encoder_params,
    create_graph_params,
    dropout,
    encode_document,
    encode_graph,
    fuse,
    init_nodes,
    node_dim,
)
from ..errors import EncodingError, LabelingError, TrainingError
from ..graph import SemanticGraph
from ..numerics import (
    GruParams,
    ParamStore,
    Tensor,
    add,
    as_tensor,
    concat,
    dot,
    gru_cell,
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
    sub,
    sum as t_sum,
    take,
    tanh,
    transpose,
)
from ..vocab import EOS, SOS, Vocabulary
from .config import TrainConfig

PROB_FLOOR = 1e-12
BCE_CLAMP = 1e-7


@dataclass
class DecoderState:
    s: Tensor  # (dec_hidden,)
    cov: Tensor  # (l,) running sum of attention distributions
    t: int


@dataclass
class StepOutput:
    vocab_dist: Tensor  # (|V|,)
    attn: Tensor  # (l,)
    p_cpy: Tensor  # (1,)
    context: Tensor  # (e_dim,)
    mixed_dist: Tensor  # (|V| + l,)


@dataclass
class DecodeContext:
    """Per-example constants reused across decoder steps."""

    E: Tensor  # (l, e_dim)
    pre_attn: Tensor  # (l, dh) precomputed W_e @ E rows
    src_tokens: list[str]


class QGModel:
    def __init__(
        self,
        cfg: TrainConfig,
        vocab: Vocabulary,
        edge_vocab,
        store: ParamStore | None = None,
    ):
        self.cfg = cfg
        self.vocab = vocab
        self.edge_vocab = tuple(edge_vocab)
        self.store = store if store is not None else ParamStore(cfg.seed)
        self._graph_indexes: dict[int, GraphIndex] = {}
        self._build_params()

    # -- parameters ---------------------------------------------------------

    def _build_params(self):
        cfg, store = self.cfg, self.store
        create_encoder_params(store, len(self.vocab), cfg.word_dim, cfg.enc_hidden)
        create_graph_params(store, self.edge_vocab, cfg.enc_hidden, cfg.K)
        nd = node_dim(cfg.enc_hidden)
        ed = 2 * cfg.enc_hidden + nd
        dh = cfg.dec_hidden
        store.parameter("cs.w", (nd,))
        store.parameter("cs.b", (1,), init="zeros")
        store.parameter("dec.init.w", (dh, cfg.word_dim))
        store.parameter("dec.init.b", (dh,), init="zeros")
        GruParams.create(store, "dec.gru", cfg.word_dim + ed, dh)
        store.parameter("dec.attn.w_e", (dh, ed))
        store.parameter("dec.attn.w_s", (dh, dh))
        store.parameter("dec.attn.w_cov", (dh,))
        store.parameter("dec.attn.b", (dh,), init="zeros")
        store.parameter("dec.attn.v", (dh,))
        store.parameter("dec.out.w", (len(self.vocab), dh + ed))
        store.parameter("dec.out.b", (len(self.vocab),), init="zeros")
        store.parameter("dec.copy.w_ctx", (ed,))
        store.parameter("dec.copy.w_s", (dh,))
        store.parameter("dec.copy.w_y", (cfg.word_dim,))
        store.parameter("dec.copy.b", (1,), init="zeros")

    def graph_index(self, g: SemanticGraph) -> GraphIndex:
        key = id(g)
        if key not in self._graph_indexes:
            self._graph_indexes[key] = GraphIndex.build(g)
        return self._graph_indexes[key]

    # -- encoding -----------------------------------------------------------

    def encode(
        self,
        doc: AnnotatedDocument,
        graph: SemanticGraph,
        training: bool = False,
        rng: np.random.Generator | None = None,
        collect_attention: bool = False,
    ) -> tuple[DocEncoding, GraphStates, list[np.ndarray], DecodeContext]:
        cfg = self.cfg
        drop_rng = rng if training else None
        enc = encode_document(
            doc,
            self.vocab,
            self.store,
            cfg.enc_hidden,
            dropout_rate=cfg.dropout_encoder if training else 0.0,
            rng=drop_rng,
        )
        h0 = init_nodes(graph, enc, self.store)
        states, attn_mats = encode_graph(
            h0,
            graph,
            self.store,
            cfg.K,
            index=self.graph_index(graph),
            normalize_per_direction=cfg.normalize_per_direction,
            collect_attention=collect_attention,
        )
        E = fuse(enc, states, graph)
        pre_attn = matmul(E, transpose(self.store["dec.attn.w_e"]))
        src_tokens = [t.text.lower() for sent in doc.sentences for t in sent]
        return enc, states, attn_mats, DecodeContext(E, pre_attn, src_tokens)

    # -- content selection ---------------------------------------------------

    def content_probs(self, states: GraphStates) -> Tensor:
        logits = add(matmul(states.final, self.store["cs.w"]), self.store["cs.b"])
        return sigmoid(logits)

    def content_selection_loss(self, probs: Tensor, graph: SemanticGraph) -> Tensor:
        flags = []
        for n in graph.nodes:
            if n.relevant_flag is None:
                raise LabelingError(f"node {n.id} has no relevance flag")
            flags.append(1.0 if n.relevant_flag else 0.0)
        y = Tensor(np.array(flags))
        lo = as_tensor(BCE_CLAMP)
        hi = as_tensor(1.0 - BCE_CLAMP)
        p = minimum(maximum(probs, lo), hi)
        one = as_tensor(1.0)
        ll = add(mul(y, log(p)), mul(sub(one, y), log(sub(one, p))))
        return neg(mean(ll))

    # -- decoding ------------------------------------------------------------

    def decoder_init(self, answer_tokens, length: int) -> DecoderState:
        ids = self.vocab.ids(t.lower() for t in answer_tokens)
        if not ids:
            raise EncodingError("cannot initialize the decoder from an empty answer")
        emb = take(self.store["emb.word"], ids)  # (n, wd)
        mean_emb = mean(emb, axis=0)
        s0 = add(matmul(self.store["dec.init.w"], mean_emb), self.store["dec.init.b"])
        return DecoderState(s=s0, cov=Tensor(np.zeros(length)), t=0)

    def decode_step(
        self,
        state: DecoderState,
        y_prev_id: int,
        ctx: DecodeContext,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> tuple[StepOutput, DecoderState]:
        cfg, store = self.cfg, self.store
        drop_rng = rng if training else None

        scores = add(ctx.pre_attn, matmul(store["dec.attn.w_s"], state.s))
        if cfg.coverage_in_attention:
            cov_feat = mul(
                reshape(state.cov, (-1, 1)), reshape(store["dec.attn.w_cov"], (1, -1))
            )
            scores = add(scores, cov_feat)
        scores = add(scores, store["dec.attn.b"])
        logits = matmul(tanh(scores), store["dec.attn.v"])  # (l,)
        attn = softmax(logits)

        context = matmul(transpose(ctx.E), attn)  # (e_dim,)
        context = dropout(context, cfg.dropout_attention if training else 0.0, drop_rng)

        y_emb = reshape(take(store["emb.word"], [y_prev_id]), (-1,))
        x_in = concat([y_emb, context])
        x_in = dropout(x_in, cfg.dropout_decoder if training else 0.0, drop_rng)
        s_next = gru_cell(x_in, state.s, GruParams.fetch(store, "dec.gru"))

        out_in = concat([s_next, context])
        vocab_dist = softmax(add(matmul(store["dec.out.w"], out_in), store["dec.out.b"]))
        p_cpy = sigmoid(
            add(
                add(
                    reshape(dot(store["dec.copy.w_ctx"], context), (1,)),
                    reshape(dot(store["dec.copy.w_s"], s_next), (1,)),
                ),
                add(reshape(dot(store["dec.copy.w_y"], y_emb), (1,)), store["dec.copy.b"]),
            )
        )
        one = as_tensor(1.0)
        mixed = concat([mul(sub(one, p_cpy), vocab_dist), mul(p_cpy, attn)])
        new_state = DecoderState(s=s_next, cov=add(state.cov, attn), t=state.t + 1)
        return (
            StepOutput(vocab_dist=vocab_dist, attn=attn, p_cpy=p_cpy, context=context, mixed_dist=mixed),
            new_state,
        )

    def _gold_indices(self, token: str, ctx: DecodeContext) -> list[int]:
        v = len(self.vocab)
        idxs = [self.vocab.id(token)]
        idxs.extend(v + i for i, t in enumerate(ctx.src_tokens) if t == token)
        return idxs

    def teacher_forced_losses(
        self,
        question_tokens,
        answer_tokens,
        ctx: DecodeContext,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> tuple[Tensor, Tensor]:
        """Mean token NLL and mean per-step coverage penalty."""
        targets = [t.lower() for t in question_tokens] + [EOS]
        inputs = [SOS] + [t.lower() for t in question_tokens]
        state = self.decoder_init(answer_tokens, len(ctx.src_tokens))
        nll_terms = []
        cov_terms = []
        floor = as_tensor(PROB_FLOOR)
        for y_prev, gold in zip(inputs, targets):
            cov_before = state.cov
            out, state = self.decode_step(state, self.vocab.id(y_prev), ctx, training, rng)
            p_gold = t_sum(take(out.mixed_dist, self._gold_indices(gold, ctx)))
            nll_terms.append(reshape(neg(log(maximum(p_gold, floor))), (1,)))
            cov_terms.append(reshape(t_sum(minimum(out.attn, cov_before)), (1,)))
        nll = mean(concat(nll_terms))
        coverage = mean(concat(cov_terms))
        return nll, coverage

    # -- joint objective ------------------------------------------------------

    def joint_loss(
        self,
        example,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> tuple[Tensor, dict[str, float]]:
        if example.question_tokens is None:
            raise TrainingError(f"example {example.name!r} has no gold question")
        cfg = self.cfg
        enc, states, _, ctx = self.encode(example.doc, example.graph, training, rng)
        nll, coverage = self.teacher_forced_losses(
            example.question_tokens, example.answer_tokens, ctx, training, rng
        )
        total = add(nll, mul(as_tensor(cfg.lambda_coverage), coverage))
        parts = {
            "nll": float(nll.data),
            "coverage": float(coverage.data),
            "content_selection": 0.0,
        }
        if cfg.lambda_content != 0.0:
            cs = self.content_selection_loss(self.content_probs(states), example.graph)
            total = add(total, mul(as_tensor(cfg.lambda_content), cs))
            parts["content_selection"] = float(cs.data)
        parts["total"] = float(total.data)
        return total, parts

    # -- generation ------------------------------------------------------------

    def generate(
        self,
        doc: AnnotatedDocument,
        graph: SemanticGraph,
        answer_tokens,
        max_len: int | None = None,
        beam: int = 1,
    ) -> list[str]:
        """Greedy (beam=1) or width-k beam decoding over the mixed distribution.

        Copied positions emit their source token. No length normalization.
        """
        max_len = self.cfg.max_decode_len if max_len is None else max_len
        if max_len <= 0:
            return []
        _, _, _, ctx = self.encode(doc, graph, training=False)
        v = len(self.vocab)

        def step_tokens(state, y_id):
            out, new_state = self.decode_step(state, y_id, ctx)
            probs = out.mixed_dist.data
            return probs, new_state

        init = self.decoder_init(answer_tokens, len(ctx.src_tokens))
        if beam <= 1:
            tokens: list[str] = []
            y_id = self.vocab.sos_id
            state = init
            for _ in range(max_len):
                probs, state = step_tokens(state, y_id)
                idx = int(np.argmax(probs))
                token = self.vocab.token(idx) if idx < v else ctx.src_tokens[idx - v]
                if token == EOS:
                    break
                tokens.append(token)
                y_id = self.vocab.id(token)
            return tokens

        # beam search: hypotheses are (score, tokens, next input id, state, done)
        beams = [(0.0, [], self.vocab.sos_id, init, False)]
        for _ in range(max_len):
            if all(done for _, _, _, _, done in beams):
                break
            candidates = []
            for score, toks, y_id, state, done in beams:
                if done:
                    candidates.append((score, toks, y_id, state, True))
                    continue
                probs, new_state = step_tokens(state, y_id)
                logp = np.log(np.maximum(probs, PROB_FLOOR))
                top = np.argsort(-logp)[: beam]
                for idx in top:
                    idx = int(idx)
                    token = self.vocab.token(idx) if idx < v else ctx.src_tokens[idx - v]
                    if token == EOS:
                        candidates.append((score + logp[idx], toks, y_id, new_state, True))
                    else:
                        candidates.append(
                            (score + logp[idx], toks + [token], self.vocab.id(token), new_state, False)
                        )
            candidates.sort(key=lambda c: (-c[0], c[1]))
            beams = candidates[:beam]
        best = max(beams, key=lambda c: (c[4], c[0]))  # prefer finished
        return best[1]

    # -- attention analysis ------------------------------------------------------

    def node_attention_scores(self, attn_mats: list[np.ndarray], n_nodes: int) -> np.ndarray:
        """Graph-encoder variant: attention mass received per node,
        renormalized over nodes (final layer or mean over layers)."""
        if not attn_mats:
            return np.full(n_nodes, 1.0 / n_nodes) if n_nodes else np.zeros(0)
        if self.cfg.attention_score_mode == "mean_layers":
            mat = np.mean(attn_mats, axis=0)
        else:
            mat = attn_mats[-1]
        received = mat.sum(axis=0)
        total = received.sum()
        if total <= 0:
            return np.full(n_nodes, 1.0 / n_nodes)
        return received / total

    def decoder_node_attention(self, example) -> np.ndarray:
        """Decoder variant (the default): total decoder attention mass over
        the gold question, aggregated onto each word's smallest covering node
        and renormalized over nodes. This is the quantity content selection
        couples to, since the selected node states sit inside the decoder's
        attention keys."""
        from ..encoders import smallest_covering_nodes

        if example.question_tokens is None:
            raise TrainingError(f"example {example.name!r} has no gold question")
        enc, _, _, ctx = self.encode(example.doc, example.graph, training=False)
        state = self.decoder_init(example.answer_tokens, len(ctx.src_tokens))
        for y_prev in [SOS] + [t.lower() for t in example.question_tokens]:
            _, state = self.decode_step(state, self.vocab.id(y_prev), ctx)
        position_mass = state.cov.data  # sum of all step attention distributions
        match = smallest_covering_nodes(enc.length, enc.sentence_offsets, example.graph)
        n = len(example.graph.nodes)
        received = np.zeros(n)
        for gi, node_id in enumerate(match):
            if node_id is not None:
                received[node_id] += position_mass[gi]
        total = received.sum()
        if total <= 0:
            return np.full(n, 1.0 / n)
        return received / total

    # -- persistence ---------------------------------------------------------------

    def checkpoint_extra(self) -> dict:
        return {
            "kind": "semqg-qg-model",
            "config": self.cfg.to_dict(),
            "vocab": list(self.vocab.tokens),
            "edge_vocab": list(self.edge_vocab),
        }

    @classmethod
    def from_checkpoint(cls, path) -> "QGModel":
        from ..numerics import read_checkpoint

        store, extra = read_checkpoint(path)
        if extra.get("kind") != "semqg-qg-model":
            raise TrainingError(f"{path} is not a model checkpoint")
        cfg = TrainConfig.from_dict(extra["config"])
        vocab = Vocabulary(tuple(extra["vocab"]))
        return cls(cfg, vocab, tuple(extra["edge_vocab"]), store=store)
