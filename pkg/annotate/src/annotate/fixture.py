"""Declarative fixture generator.

A fixture spec fully spells out tokens, tags, trees and tuples; this module
only validates the shape and serializes it byte-deterministically, so
committed fixtures regenerate identically.

Spec layout::

    {
      "sentences": [
        {"tokens": [["Dennis", "NNP"], ...],
         "dep": {"root": 2, "edges": [[2, 1, "nsubj"], ...]},
         "srl": [{"verb": [2, 3],
                  "arguments": [["ARG1", 0, 2]],
                  "modifiers": [["ARGM-LOC", 5, 7]]}]},
        ...
      ],
      "coref": [[[0, 0, 2], [1, 0, 1]], ...],   # clusters of [s, start, end]
      "answer": "...",
      "question": "..." | null,
      "evidence": [0, 1] | null
    }
"""

from __future__ import annotations

import json

from .errors import AdapterError


def _span(s, start, end, role=None):
    obj = {"s": s, "start": start, "end": end}
    if role is not None:
        obj = {"role": role, **obj}
    return obj


def make_fixture(spec: dict) -> bytes:
    try:
        sentences = spec["sentences"]
        answer = spec["answer"]
    except KeyError as exc:
        raise AdapterError("fixture", f"spec missing {exc}") from exc
    if not isinstance(sentences, list) or not sentences:
        raise AdapterError("fixture", "spec needs at least one sentence")

    out_sentences = []
    out_dep = []
    out_srl = []
    for si, sent in enumerate(sentences):
        try:
            tokens = sent["tokens"]
            out_sentences.append([{"text": t, "pos": p} for t, p in tokens])
            dep = sent.get("dep")
            if dep is None:
                out_dep.append(None)
            else:
                out_dep.append(
                    {
                        "s": si,
                        "root": dep["root"],
                        "edges": [
                            {"head": h, "dep": d, "rel": r} for h, d, r in dep["edges"]
                        ],
                    }
                )
            tuples = []
            for t in sent.get("srl", []):
                v0, v1 = t["verb"]
                tuples.append(
                    {
                        "verb": _span(si, v0, v1),
                        "arguments": [
                            _span(si, a, b, role) for role, a, b in t.get("arguments", [])
                        ],
                        "modifiers": [
                            _span(si, a, b, role) for role, a, b in t.get("modifiers", [])
                        ],
                    }
                )
            out_srl.append(tuples)
        except (KeyError, TypeError, ValueError) as exc:
            raise AdapterError("fixture", f"sentence {si} malformed: {exc}") from exc

    obj = {
        "sentences": out_sentences,
        "srl": out_srl,
        "dep": out_dep,
        "coref": [
            {"mentions": [_span(s, a, b) for s, a, b in cluster]}
            for cluster in spec.get("coref", [])
        ],
        "answer": answer,
        "question": spec.get("question"),
        "evidence": spec.get("evidence"),
    }
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")
