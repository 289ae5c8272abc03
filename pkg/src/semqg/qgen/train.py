"""Adam training loop with validation-driven learning-rate decay and early
stopping. Per-epoch metrics are emitted as JSON lines."""

from __future__ import annotations

import json
import math

import numpy as np

from ..errors import TrainingError
from ..numerics import ParamStore, backward
from .analyze import analyze_attention
from .config import TrainConfig
from .model import QGModel


class Adam:
    def __init__(self, store: ParamStore, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.store = store
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p.data) for name, p in store.items()}
        self.v = {name: np.zeros_like(p.data) for name, p in store.items()}

    def step(self, scale: float = 1.0):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for name, p in self.store.items():
            if p.grad is None:
                continue
            g = p.grad * scale
            self.m[name] = b1 * self.m[name] + (1 - b1) * g
            self.v[name] = b2 * self.v[name] + (1 - b2) * g * g
            m_hat = self.m[name] / (1 - b1**self.t)
            v_hat = self.v[name] / (1 - b2**self.t)
            p.data -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def content_selection_accuracy(model: QGModel, examples) -> float:
    correct = 0
    total = 0
    for ex in examples:
        _, states, _, _ = model.encode(ex.doc, ex.graph, training=False)
        probs = model.content_probs(states).data
        for node, p in zip(ex.graph.nodes, probs):
            if node.relevant_flag is None:
                continue
            total += 1
            correct += int((p > 0.5) == node.relevant_flag)
    return correct / total if total else 0.0


def train(
    model: QGModel,
    train_examples,
    val_examples=None,
    metrics_path=None,
    log=None,
) -> list[dict]:
    """Train in place; returns the per-epoch metrics records."""
    cfg: TrainConfig = model.cfg
    if not train_examples:
        raise TrainingError("empty training dataset")
    val_examples = val_examples if val_examples else train_examples

    order_rng = np.random.default_rng([cfg.seed, 101])
    dropout_rng = np.random.default_rng([cfg.seed, 202])
    adam = Adam(model.store, cfg.learning_rate)
    best_val = math.inf
    stale = 0
    decay_wait = 0
    metrics: list[dict] = []
    sink = open(metrics_path, "w", encoding="utf-8") if metrics_path else None
    try:
        for epoch in range(1, cfg.max_epochs + 1):
            idx = order_rng.permutation(len(train_examples))
            losses = []
            for start in range(0, len(idx), cfg.batch_size):
                batch = idx[start : start + cfg.batch_size]
                model.store.zero_grad()
                for i in batch:
                    total, parts = model.joint_loss(
                        train_examples[int(i)], training=True, rng=dropout_rng
                    )
                    if not math.isfinite(parts["total"]):
                        raise TrainingError(
                            f"non-finite loss on {train_examples[int(i)].name!r} at epoch {epoch}"
                        )
                    backward(total)
                    losses.append(parts["total"])
                adam.lr = cfg.learning_rate * (0.5 ** _decays(metrics))
                adam.step(scale=1.0 / len(batch))
            train_loss = float(np.mean(losses))

            val_losses = [
                model.joint_loss(ex, training=False)[1]["total"] for ex in val_examples
            ]
            val_loss = float(np.mean(val_losses))
            analysis = analyze_attention(model, val_examples, strict=False)
            record = {
                "epoch": epoch,
                "train_loss": train_loss,
                "val_loss": val_loss,
                "cs_accuracy": content_selection_accuracy(model, val_examples),
                "ratio": analysis["ratio"],
                "entropy": analysis["entropy"],
            }
            if val_loss < best_val - 1e-12:
                best_val = val_loss
                stale = 0
                decay_wait = 0
                record["improved"] = True
            else:
                stale += 1
                decay_wait += 1
                record["improved"] = False
                if decay_wait >= cfg.lr_decay_patience:
                    record["lr_halved"] = True
                    decay_wait = 0
            metrics.append(record)
            if sink:
                sink.write(json.dumps(record) + "\n")
                sink.flush()
            if log:
                log(record)
            if stale >= cfg.early_stop_patience:
                break
    finally:
        if sink:
            sink.close()
    return metrics


def _decays(metrics: list[dict]) -> int:
    return sum(1 for r in metrics if r.get("lr_halved"))
