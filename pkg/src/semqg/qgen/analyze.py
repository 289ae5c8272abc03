"""Attention alignment with the content-selection ground truth: how much
graph attention mass lands on relevant nodes versus irrelevant ones, and how
concentrated the per-node attention distribution is."""

from __future__ import annotations

import math

import numpy as np

from ..errors import LabelingError


def node_attention_analysis(scores: np.ndarray, relevant: list[bool]) -> tuple[float, float]:
    """(ratio, entropy) for one graph.

    ``scores`` is the per-node attention distribution (sums to 1). The ratio
    is mass on relevant nodes over mass on irrelevant nodes, +inf when there
    is no irrelevant mass (e.g. every node relevant). Entropy uses natural log.
    """
    rel = np.array(relevant, dtype=bool)
    rel_mass = float(scores[rel].sum())
    irr_mass = float(scores[~rel].sum())
    ratio = math.inf if irr_mass <= 0.0 else rel_mass / irr_mass
    nonzero = scores[scores > 0]
    entropy = float(-(nonzero * np.log(nonzero)).sum())
    return ratio, entropy


def analyze_attention(model, examples, strict: bool = True) -> dict:
    """Dataset means of the relevant/irrelevant attention ratio and entropy.

    With ``strict`` (the default), examples lacking relevance flags raise a
    :class:`LabelingError`; the training loop passes ``strict=False`` so the
    per-epoch log simply skips them.
    """
    ratios = []
    entropies = []
    per_example = []
    for ex in examples:
        flags = [n.relevant_flag for n in ex.graph.nodes]
        if any(f is None for f in flags):
            if strict:
                raise LabelingError(f"example {ex.name!r} has unlabeled nodes")
            continue
        if model.cfg.attention_score_mode == "decoder":
            if ex.question_tokens is None:
                if strict:
                    raise LabelingError(f"example {ex.name!r} has no gold question")
                continue
            scores = model.decoder_node_attention(ex)
        else:
            _, _, attn_mats, _ = model.encode(
                ex.doc, ex.graph, training=False, collect_attention=True
            )
            scores = model.node_attention_scores(attn_mats, len(ex.graph.nodes))
        ratio, entropy = node_attention_analysis(scores, [bool(f) for f in flags])
        ratios.append(ratio)
        entropies.append(entropy)
        per_example.append({"name": ex.name, "ratio": ratio, "entropy": entropy})
    if not ratios:
        return {"ratio": math.nan, "entropy": math.nan, "per_example": []}
    return {
        "ratio": float(np.mean(ratios)),
        "entropy": float(np.mean(entropies)),
        "per_example": per_example,
    }
