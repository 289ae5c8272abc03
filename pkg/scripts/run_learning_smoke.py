#!/usr/bin/env python3
"""Desk-scale learning check: 50 synthetic documents, 30 epochs, fixed seed.

Prints the per-epoch metrics and asserts the two smoke conditions (final
training loss below half the initial, content-selection accuracy above the
majority-class baseline).
"""

import argparse
import json
import time

from semqg.qgen import QGModel, TrainConfig, train
from semqg.qgen.data import edge_vocabulary_for, prepare_examples, vocabulary_for
from semqg.synthdata import make_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--epochs", type=int, default=30)
    parser.add_argument("--examples", type=int, default=50)
    args = parser.parse_args()

    cfg = TrainConfig(
        seed=args.seed,
        learning_rate=0.006,
        batch_size=10,
        max_epochs=args.epochs,
        word_dim=12,
        enc_hidden=8,
        dec_hidden=20,
        K=1,
        graph_format="dp",
        dropout_encoder=0.0,
        dropout_decoder=0.0,
        dropout_attention=0.0,
        early_stop_patience=10_000,
        lr_decay_patience=10_000,
    )
    examples = prepare_examples(make_corpus(args.examples), cfg)
    vocab = vocabulary_for(examples, cfg)
    model = QGModel(cfg, vocab, edge_vocabulary_for(examples))
    t0 = time.time()
    metrics = train(model, examples, examples, log=lambda rec: print(json.dumps(rec)))
    first, last = metrics[0], metrics[-1]
    flags = [n.relevant_flag for ex in examples for n in ex.graph.nodes]
    majority = max(sum(flags), len(flags) - sum(flags)) / len(flags)
    print(
        f"\nloss {first['train_loss']:.3f} -> {last['train_loss']:.3f} "
        f"(x{last['train_loss'] / first['train_loss']:.3f}); "
        f"cs_accuracy {last['cs_accuracy']:.3f} vs majority {majority:.3f}; "
        f"{time.time() - t0:.0f}s"
    )
    assert last["train_loss"] < 0.5 * first["train_loss"]
    assert last["cs_accuracy"] > majority
    print("smoke conditions satisfied")


if __name__ == "__main__":
    main()
