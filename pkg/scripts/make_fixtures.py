#!/usr/bin/env python3
"""Regenerate the hand-built fixture documents under tests/fixtures/docs/.

Each fixture is written out as annotations JSON. The builder options used for
the DP golden of each fixture live in tests/fixture_table.py.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "docs"


def sent(*pairs):
    return [{"text": t, "pos": p} for t, p in pairs]


def span(s, start, end, role=None):
    obj = {"s": s, "start": start, "end": end}
    if role:
        obj = {"role": role, **obj}
    return obj


def tree(s, root, *edges):
    return {"s": s, "root": root, "edges": [{"head": h, "dep": d, "rel": r} for h, d, r in edges]}


FIXTURES = {}

FIXTURES["f01_minimal_tuple"] = {
    "sentences": [
        sent(("Hoonah", "NNP"), ("Airport", "NNP"), ("opened", "VBD"), ("yesterday", "RB"), (".", ".")),
    ],
    "srl": [[{"verb": span(0, 2, 3), "arguments": [span(0, 0, 2, "ARG1")], "modifiers": [span(0, 3, 4, "ARGM-TMP")]}]],
    "dep": [tree(0, 2, (1, 0, "nn"), (2, 1, "nsubj"), (2, 3, "tmod"), (2, 4, "punct"))],
    "coref": [],
    "answer": "yesterday",
    "question": "when did hoonah airport open ?",
    "evidence": [0],
}

FIXTURES["f02_no_modifier"] = {
    "sentences": [sent(("dogs", "NNS"), ("bark", "VBP"), (".", "."))],
    "srl": [[{"verb": span(0, 1, 2), "arguments": [span(0, 0, 1, "ARG0")], "modifiers": []}]],
    "dep": [tree(0, 1, (1, 0, "nsubj"), (1, 2, "punct"))],
    "coref": [],
    "answer": "dogs",
    "question": "what barks ?",
    "evidence": [0],
}

FIXTURES["f03_airports"] = {
    "sentences": [
        sent(("Hoonah", "NNP"), ("Airport", "NNP"), ("is", "VBZ"), ("in", "IN"), ("Alaska", "NNP"), (".", ".")),
        sent(("Pago", "NNP"), ("Pago", "NNP"), ("International", "NNP"), ("Airport", "NNP"),
             ("serves", "VBZ"), ("Pago", "NNP"), ("Pago", "NNP"), (".", ".")),
    ],
    "srl": [
        [{"verb": span(0, 2, 3), "arguments": [span(0, 0, 2, "ARG1")], "modifiers": [span(0, 3, 5, "ARGM-LOC")]}],
        [{"verb": span(1, 4, 5), "arguments": [span(1, 0, 4, "ARG0"), span(1, 5, 7, "ARG1")], "modifiers": []}],
    ],
    "dep": [
        tree(0, 2, (1, 0, "nn"), (2, 1, "nsubj"), (2, 3, "prep"), (3, 4, "pobj"), (2, 5, "punct")),
        tree(1, 4, (3, 0, "nn"), (3, 1, "nn"), (3, 2, "nn"), (4, 3, "nsubj"),
             (6, 5, "nn"), (4, 6, "dobj"), (4, 7, "punct")),
    ],
    "coref": [],
    "answer": "Alaska",
    "question": "are hoonah airport and pago pago international airport both in the united states ?",
    "evidence": [0, 1],
}

FIXTURES["f04_shared_argument"] = {
    "sentences": [
        sent(("Hoonah", "NNP"), ("Airport", "NNP"), ("opened", "VBD"), (".", ".")),
        sent(("People", "NNS"), ("like", "VBP"), ("Hoonah", "NNP"), ("Airport", "NNP"), (".", ".")),
    ],
    "srl": [
        [{"verb": span(0, 2, 3), "arguments": [span(0, 0, 2, "ARG1")], "modifiers": []}],
        [{"verb": span(1, 1, 2), "arguments": [span(1, 0, 1, "ARG0"), span(1, 2, 4, "ARG1")], "modifiers": []}],
    ],
    "dep": [
        tree(0, 2, (1, 0, "nn"), (2, 1, "nsubj"), (2, 3, "punct")),
        tree(1, 1, (1, 0, "nsubj"), (3, 2, "nn"), (1, 3, "dobj"), (1, 4, "punct")),
    ],
    "coref": [],
    "answer": "Hoonah Airport",
    "question": "who likes hoonah airport ?",
    "evidence": [0, 1],
}

FIXTURES["f05_appendix_triple"] = {
    "sentences": [
        sent(("Dennis", "NNP"), ("Banks", "NNP"), ("was", "VBD"), ("a", "DT"), ("leading", "JJ"),
             ("member", "JJ"), ("of", "IN"), ("the", "DT"), ("Native", "JJ"), ("American", "JJ"),
             ("self-determination", "JJ"), ("movement", "JJ"), (".", ".")),
    ],
    "srl": [[{
        "verb": span(0, 2, 3),
        "arguments": [span(0, 0, 2, "ARG1"), span(0, 3, 12, "ARG2")],
        "modifiers": [],
    }]],
    "dep": [tree(0, 2,
                 (2, 1, "nsubj"), (1, 0, "nn"), (2, 5, "attr"), (5, 3, "det"), (5, 4, "amod"),
                 (5, 6, "prep"), (5, 11, "pobj"), (11, 7, "det"), (11, 8, "amod"), (11, 9, "amod"),
                 (11, 10, "amod"), (2, 12, "punct"))],
    "coref": [],
    "answer": "Dennis Banks",
    "question": "who was a leading member of the native american self-determination movement ?",
    "evidence": [0],
}

FIXTURES["f06_prune_chains"] = {
    "sentences": [
        sent(("run", "VB"), (",", ","), (",", ","), ("fast", "RB"), (".", ".")),
        sent(("!", "."), ("stop", "VB"), ("now", "RB")),
    ],
    "srl": [
        [{"verb": span(0, 0, 1), "arguments": [], "modifiers": [span(0, 3, 4, "ARGM-MNR")]}],
        [{"verb": span(1, 1, 2), "arguments": [], "modifiers": [span(1, 2, 3, "ARGM-TMP")]}],
    ],
    "dep": [
        tree(0, 0, (0, 1, "punct"), (1, 2, "punct"), (2, 3, "advmod"), (0, 4, "punct")),
        tree(1, 0, (0, 1, "dep"), (1, 2, "advmod")),
    ],
    "coref": [],
    "answer": "fast",
    "question": "how should one run ?",
    "evidence": [0],
}

FIXTURES["f07_merge_chain"] = {
    "sentences": [
        sent(("very", "RB"), ("old", "JJ"), ("red", "JJ"), ("barn", "NN"), ("stood", "VBD"), (".", ".")),
    ],
    "srl": [[{"verb": span(0, 4, 5), "arguments": [span(0, 0, 4, "ARG1")], "modifiers": []}]],
    "dep": [tree(0, 4, (4, 3, "nsubj"), (3, 2, "amod"), (2, 1, "amod"), (1, 0, "advmod"), (4, 5, "punct"))],
    "coref": [],
    "answer": "a barn",
    "question": "what stood ?",
    "evidence": [0],
}

FIXTURES["f08_coref"] = {
    "sentences": [
        sent(("Frodo", "NNP"), ("Baggins", "NNP"), ("left", "VBD"), (".", ".")),
        sent(("He", "PRP"), ("carried", "VBD"), ("the", "DT"), ("ring", "NN"), (".", ".")),
    ],
    "srl": [
        [{"verb": span(0, 2, 3), "arguments": [span(0, 0, 2, "ARG0")], "modifiers": []}],
        [{"verb": span(1, 1, 2), "arguments": [span(1, 0, 1, "ARG0"), span(1, 2, 4, "ARG1")], "modifiers": []}],
    ],
    "dep": [
        tree(0, 2, (1, 0, "nn"), (2, 1, "nsubj"), (2, 3, "punct")),
        tree(1, 1, (1, 0, "nsubj"), (3, 2, "det"), (1, 3, "dobj"), (1, 4, "punct")),
    ],
    "coref": [{"mentions": [span(0, 0, 2), span(1, 0, 1)]}],
    "answer": "the ring",
    "question": "what did frodo baggins carry ?",
    "evidence": [0, 1],
}

FIXTURES["f09_multi_arg"] = {
    "sentences": [
        sent(("Alice", "NNP"), ("gave", "VBD"), ("Bob", "NNP"), ("books", "NNS"),
             ("in", "IN"), ("Paris", "NNP"), ("yesterday", "RB"), (".", ".")),
    ],
    "srl": [[{
        "verb": span(0, 1, 2),
        "arguments": [span(0, 0, 1, "ARG0"), span(0, 2, 3, "ARG2"), span(0, 3, 4, "ARG1")],
        "modifiers": [span(0, 4, 6, "ARGM-LOC"), span(0, 6, 7, "ARGM-TMP")],
    }]],
    "dep": [tree(0, 1, (1, 0, "nsubj"), (1, 2, "iobj"), (1, 3, "dobj"), (1, 4, "prep"),
                 (4, 5, "pobj"), (1, 6, "tmod"), (1, 7, "punct"))],
    "coref": [],
    "answer": "books",
    "question": "what did alice give bob in paris ?",
    "evidence": [0],
}

FIXTURES["f10_intra_sentence"] = {
    "sentences": [
        sent(("The", "DT"), ("old", "JJ"), ("mayor", "NN"), ("visited", "VBD"), ("the", "DT"),
             ("old", "JJ"), ("town", "NN"), ("and", "CC"), ("praised", "VBD"), ("the", "DT"),
             ("old", "JJ"), ("town", "NN"), ("hall", "NN"), (".", ".")),
    ],
    "srl": [[
        {"verb": span(0, 3, 4), "arguments": [span(0, 0, 3, "ARG0"), span(0, 4, 7, "ARG1")], "modifiers": []},
        {"verb": span(0, 8, 9), "arguments": [span(0, 0, 3, "ARG0"), span(0, 9, 13, "ARG1")], "modifiers": []},
    ]],
    "dep": [tree(0, 3, (2, 0, "det"), (2, 1, "amod"), (3, 2, "nsubj"), (6, 4, "det"), (6, 5, "amod"),
                 (3, 6, "dobj"), (3, 7, "cc"), (3, 8, "conj"), (12, 9, "det"), (12, 10, "amod"),
                 (12, 11, "nn"), (8, 12, "dobj"), (3, 13, "punct"))],
    "coref": [],
    "answer": "yes",
    "question": "did the old mayor praise the old town hall ?",
    "evidence": [0],
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, obj in FIXTURES.items():
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
