"""Turn annotated documents into training examples with labeled graphs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

from ..annotations import AnnotatedDocument, parse_annotations
from ..builders import build_dp_graph, build_srl_graph
from ..errors import SemqgWarning, TrainingError
from ..graph import SemanticGraph, label_relevant_nodes, tag_answer_nodes
from ..text import simple_word_tokens
from ..vocab import Vocabulary, build_vocabulary
from .config import TrainConfig


@dataclass
class QGExample:
    name: str
    doc: AnnotatedDocument
    graph: SemanticGraph
    src_tokens: list[str]
    answer_tokens: list[str]
    question_tokens: list[str] | None


def build_example(name: str, doc: AnnotatedDocument, cfg: TrainConfig) -> QGExample | None:
    if cfg.graph_format == "srl":
        graph = build_srl_graph(doc)
    else:
        graph = build_dp_graph(doc)
    if not graph.nodes:
        warnings.warn(f"{name}: empty graph, example skipped", SemqgWarning, stacklevel=2)
        return None
    graph = tag_answer_nodes(graph, doc.answer)
    if doc.gold_question:
        graph = label_relevant_nodes(graph, doc.gold_question)
    return QGExample(
        name=name,
        doc=doc,
        graph=graph,
        src_tokens=[t.text.lower() for sent in doc.sentences for t in sent],
        answer_tokens=simple_word_tokens(doc.answer),
        question_tokens=simple_word_tokens(doc.gold_question) if doc.gold_question else None,
    )


def prepare_examples(named_docs, cfg: TrainConfig) -> list[QGExample]:
    out = []
    for name, doc in named_docs:
        ex = build_example(name, doc, cfg)
        if ex is not None:
            out.append(ex)
    return out


def load_directory(path, cfg: TrainConfig) -> list[QGExample]:
    """Load every ``*.json`` annotation file in a directory (sorted by name)."""
    base = Path(path)
    files = sorted(base.glob("*.json"))
    if not files:
        raise TrainingError(f"no annotation files found in {base}")
    docs = [(f.stem, parse_annotations(f.read_bytes())) for f in files]
    return prepare_examples(docs, cfg)


def split_train_val(examples: list[QGExample], cfg: TrainConfig) -> tuple[list[QGExample], list[QGExample]]:
    """Deterministic tail split; a dataset of one example validates on itself."""
    if len(examples) < 2 or cfg.val_fraction <= 0:
        return examples, examples
    n_val = max(1, int(round(len(examples) * cfg.val_fraction)))
    n_val = min(n_val, len(examples) - 1)
    return examples[:-n_val], examples[-n_val:]


def vocabulary_for(examples: list[QGExample], cfg: TrainConfig) -> Vocabulary:
    streams = []
    for ex in examples:
        streams.append(ex.src_tokens)
        streams.append(ex.answer_tokens)
        if ex.question_tokens:
            streams.append(ex.question_tokens)
    return build_vocabulary(streams, min_freq=cfg.min_freq)


def edge_vocabulary_for(examples: list[QGExample]) -> tuple[str, ...]:
    labels = set()
    for ex in examples:
        labels.update(ex.graph.edge_vocabulary)
    return tuple(sorted(labels))
