"""Command-line entry point.

Exit codes: 0 success, 1 validation/processing failure, 2 usage error.
All randomness flows from --seed (fallback: the SEMGRAPH_SEED environment
variable, then the config file, then 0), so identical invocations on
identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import checks
from .annotations import parse_annotations, validate
from .builders import build_dp_graph, build_srl_graph
from .builders.dp import DEFAULT_PRUNE_RELATIONS
from .errors import SemqgError
from .graph import from_json, label_relevant_nodes, stats, tag_answer_nodes, to_dot, to_json
from .numerics import write_checkpoint
from .qgen import (
    QGModel,
    TrainConfig,
    analyze_attention,
    bleu,
    load_directory,
    train,
)
from .qgen.data import edge_vocabulary_for, split_train_val, vocabulary_for


def _resolve_seed(args, cfg: TrainConfig | None = None) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("SEMGRAPH_SEED")
    if env is not None:
        return int(env)
    if cfg is not None:
        return cfg.seed
    return 0


def _cmd_build_graph(args) -> int:
    raw = Path(args.infile).read_bytes()
    doc = parse_annotations(raw)
    violations = validate(doc)
    if violations:
        for v in violations:
            print(f"violation at {v.path}: {v.message}", file=sys.stderr)
        return 1
    if args.format == "srl":
        graph = build_srl_graph(doc)
    else:
        prune = (
            frozenset(x for x in args.prune_rels.split(",") if x)
            if args.prune_rels is not None
            else DEFAULT_PRUNE_RELATIONS
        )
        graph = build_dp_graph(doc, prune_relations=prune, max_edge_labels=args.max_edge_labels)
    if doc.answer:
        graph = tag_answer_nodes(graph, doc.answer)
    if doc.gold_question:
        graph = label_relevant_nodes(graph, doc.gold_question)
    Path(args.outfile).write_bytes(to_json(graph))
    if args.dot:
        Path(args.dot).write_bytes(to_dot(graph))
    return 0


def _cmd_stats(args) -> int:
    rows = []
    for path in args.infiles:
        g = from_json(Path(path).read_bytes())
        s = stats(g)
        rows.append((Path(path).name, s))
    header = f"{'graph':24s} {'nodes':>6s} {'edges':>6s} {'comps':>6s} {'tok/node':>9s}"
    print(header)
    print("-" * len(header))
    total_nodes = total_edges = total_tokens = 0
    for name, s in rows:
        print(
            f"{name:24s} {s.node_count:6d} {s.edge_count:6d} "
            f"{s.connected_components:6d} {float(s.mean_tokens_per_node):9.3f}"
        )
        total_nodes += s.node_count
        total_edges += s.edge_count
        total_tokens += s.node_count * s.mean_tokens_per_node
    if len(rows) > 1 and total_nodes:
        print("-" * len(header))
        print(
            f"{'TOTAL':24s} {total_nodes:6d} {total_edges:6d} {'':>6s} "
            f"{float(total_tokens / total_nodes):9.3f}"
        )
    return 0


def _load_config(args) -> TrainConfig:
    if args.config:
        cfg = TrainConfig.from_json_file(args.config)
    else:
        cfg = TrainConfig()
    overrides = {}
    for field in ("epochs", "lr", "batch_size", "lambda_cs", "lambda_cov"):
        value = getattr(args, field, None)
        if value is not None:
            overrides[
                {
                    "epochs": "max_epochs",
                    "lr": "learning_rate",
                    "batch_size": "batch_size",
                    "lambda_cs": "lambda_content",
                    "lambda_cov": "lambda_coverage",
                }[field]
            ] = value
    if overrides or getattr(args, "seed", None) is not None or "SEMGRAPH_SEED" in os.environ:
        d = cfg.to_dict()
        d.update(overrides)
        d["seed"] = _resolve_seed(args, cfg)
        cfg = TrainConfig.from_dict(d)
    return cfg


def _load_split(data_dir: str, cfg: TrainConfig):
    base = Path(data_dir)
    if (base / "train").is_dir():
        train_ex = load_directory(base / "train", cfg)
        val_ex = load_directory(base / "val", cfg) if (base / "val").is_dir() else train_ex
        return train_ex, val_ex
    return split_train_val(load_directory(base, cfg), cfg)


def _cmd_train(args) -> int:
    cfg = _load_config(args)
    train_ex, val_ex = _load_split(args.data, cfg)
    vocab = vocabulary_for(train_ex + val_ex, cfg)
    edge_vocab = edge_vocabulary_for(train_ex + val_ex)
    model = QGModel(cfg, vocab, edge_vocab)
    metrics_path = args.metrics or (args.out + ".metrics.jsonl")
    train(
        model,
        train_ex,
        val_ex,
        metrics_path=metrics_path,
        log=lambda rec: print(json.dumps(rec)),
    )
    write_checkpoint(args.out, model.store, extra=model.checkpoint_extra())
    return 0


def _cmd_eval(args) -> int:
    model = QGModel.from_checkpoint(args.ckpt)
    examples = load_directory(args.data, model.cfg)
    scores = {n: [] for n in (1, 2, 3, 4)}
    count = 0
    for ex in examples:
        if ex.question_tokens is None:
            continue
        hyp = model.generate(ex.doc, ex.graph, ex.answer_tokens, max_len=args.max_len, beam=args.beam)
        for n in scores:
            scores[n].append(bleu(hyp, [ex.question_tokens], n))
        count += 1
    result = {f"bleu{n}": (sum(v) / len(v) if v else 0.0) for n, v in scores.items()}
    result["examples"] = count
    print(json.dumps(result, indent=2))
    return 0


def _cmd_analyze(args) -> int:
    model = QGModel.from_checkpoint(args.ckpt)
    examples = load_directory(args.data, model.cfg)
    result = analyze_attention(model, examples)
    result.pop("per_example", None)
    print(json.dumps(result, indent=2))
    return 0


def _cmd_gradcheck(args) -> int:
    seed = _resolve_seed(args)
    names = [args.module] if args.module else list(checks.ALL_CHECKS)
    ok = True
    for name in names:
        if name not in checks.ALL_CHECKS:
            print(f"unknown module {name!r}", file=sys.stderr)
            return 2
        fn, tolerance = checks.ALL_CHECKS[name]
        err = fn(seed)
        status = "PASS" if err < tolerance else "FAIL"
        ok = ok and err < 1e-4
        print(f"{name:12s} max_rel_err={err:.3e} tolerance={tolerance:.0e} {status}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semqg",
        description="Semantic graph construction and question generation at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="build a semantic graph from annotations JSON")
    p.add_argument("--format", choices=["srl", "dp"], required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--dot", help="also write a DOT rendering")
    p.add_argument("--prune-rels", help="comma-separated relation labels to prune (DP only)")
    p.add_argument("--max-edge-labels", type=int, default=20)
    p.set_defaults(fn=_cmd_build_graph)

    p = sub.add_parser("stats", help="graph statistics table")
    p.add_argument("--in", dest="infiles", nargs="+", required=True)
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("train", help="train the question generation model")
    p.add_argument("--data", required=True)
    p.add_argument("--config", help="JSON file mirroring TrainConfig fields")
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--metrics", help="metrics JSONL path (default: <out>.metrics.jsonl)")
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--batch-size", type=int, dest="batch_size")
    p.add_argument("--lambda-cs", type=float, dest="lambda_cs")
    p.add_argument("--lambda-cov", type=float, dest="lambda_cov")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("eval", help="BLEU 1-4 of generated questions")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--beam", type=int, default=1)
    p.add_argument("--max-len", type=int, default=30, dest="max_len")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("analyze", help="attention ratio/entropy against relevance labels")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("gradcheck", help="finite-difference gradient verification")
    p.add_argument("--module", choices=list(checks.ALL_CHECKS), help="run one module only")
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=_cmd_gradcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SemqgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
