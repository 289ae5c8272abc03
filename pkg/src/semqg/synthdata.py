"""Deterministic synthetic corpus for desk-scale training experiments.

Each document has two hand-annotated sentences built from small templates:
a first sentence placing an entity somewhere, and a second sentence whose
subject opened near that same entity, so the shared phrase bridges the two
sentences. Questions follow two templates (a "where" question about the first
entity, a "what opened near" question about the second subject), keeping the
mapping from document content to question learnable by a small model.
"""

from __future__ import annotations

from .annotations import (
    AnnotatedDocument,
    CorefCluster,
    DepEdge,
    DepTree,
    Span,
    SrlTuple,
    Token,
)

_ADJECTIVES = ["red", "old", "grand", "silver", "little", "north", "stone", "royal"]
_THINGS = ["airport", "museum", "bridge", "tower", "harbor", "library", "station", "garden"]
_PLACES = ["arlen", "quahog", "springfield", "langley", "shelby", "ogden", "fargo", "salem"]


def _sentence_tokens(words_pos, sentence_index: int) -> tuple[Token, ...]:
    return tuple(
        Token(text, pos, sentence_index, i) for i, (text, pos) in enumerate(words_pos)
    )


def make_document(index: int) -> AnnotatedDocument:
    adj = _ADJECTIVES[index % len(_ADJECTIVES)]
    thing = _THINGS[(index // 2) % len(_THINGS)]
    place = _PLACES[(index * 3) % len(_PLACES)]
    adj2 = _ADJECTIVES[(index + 3) % len(_ADJECTIVES)]
    thing2 = _THINGS[(index + 5) % len(_THINGS)]

    # s0: the <adj> <thing> is located in <place> .
    s0 = _sentence_tokens(
        [
            ("the", "DT"),
            (adj, "JJ"),
            (thing, "NN"),
            ("is", "VBZ"),
            ("located", "VBN"),
            ("in", "IN"),
            (place, "NNP"),
            (".", "."),
        ],
        0,
    )
    dep0 = DepTree(
        0,
        root=4,
        edges=(
            DepEdge(2, 0, "det"),
            DepEdge(2, 1, "amod"),
            DepEdge(4, 2, "nsubj"),
            DepEdge(4, 3, "aux"),
            DepEdge(4, 5, "prep"),
            DepEdge(5, 6, "pobj"),
            DepEdge(4, 7, "punct"),
        ),
    )
    srl0 = SrlTuple(
        verb=Span(0, 4, 5),
        arguments=(("ARG1", Span(0, 0, 3)),),
        modifiers=(("ARGM-LOC", Span(0, 5, 7)),),
    )

    # s1: the <place> <thing2> opened near the <adj> <thing> .
    s1 = _sentence_tokens(
        [
            ("the", "DT"),
            (place, "NNP"),
            (thing2, "NN"),
            ("opened", "VBD"),
            ("near", "IN"),
            ("the", "DT"),
            (adj, "JJ"),
            (thing, "NN"),
            (".", "."),
        ],
        1,
    )
    dep1 = DepTree(
        1,
        root=3,
        edges=(
            DepEdge(2, 0, "det"),
            DepEdge(2, 1, "nn"),
            DepEdge(3, 2, "nsubj"),
            DepEdge(3, 4, "prep"),
            DepEdge(4, 7, "pobj"),
            DepEdge(7, 5, "det"),
            DepEdge(7, 6, "amod"),
            DepEdge(3, 8, "punct"),
        ),
    )
    srl1 = SrlTuple(
        verb=Span(1, 3, 4),
        arguments=(("ARG1", Span(1, 0, 3)),),
        modifiers=(("ARGM-LOC", Span(1, 4, 8)),),
    )

    if index % 2 == 0:
        question = f"where is the {adj} {thing} located ?"
        answer = place
    else:
        question = f"what opened near the {adj} {thing} ?"
        answer = f"the {place} {thing2}"

    return AnnotatedDocument(
        sentences=(s0, s1),
        srl=((srl0,), (srl1,)),
        dep=(dep0, dep1),
        coref=(
            CorefCluster((Span(0, 0, 3), Span(1, 5, 8))),
        ),
        answer=answer,
        gold_question=question,
        evidence_sentences=(0, 1),
    )


def make_corpus(n: int) -> list[tuple[str, AnnotatedDocument]]:
    return [(f"synth{i:03d}", make_document(i)) for i in range(n)]
