"""Annotation pipeline: raw text in, annotations JSON out.

Stage order is fixed: tokenize/tag, resolve coreference on the raw token
stream, then dependency-parse and extract predicate-argument tuples per
sentence of the *resolved* text (spans into parses cannot survive later
substitution, so substitution always happens first).

Two backends:

- ``rule``   — the deterministic built-in stages (no external dependencies);
               also the fixture generator used by all tests.
- ``spacy``  — wraps external toolkits (spaCy for tokenization/POS/parsing,
               AllenNLP predictors for SRL and coreference) when installed;
               every stage failure names the stage.

The model versions a backend expects are pinned in a manifest checked at
startup; the manifest hash is embedded in every output document.
"""

from __future__ import annotations

import hashlib
import importlib
import json
from importlib import resources

from . import __version__
from .errors import AdapterError
from .rulenlp import (
    extract_srl,
    parse_dependencies,
    resolve_pronouns,
    tag_sentence,
    tokenize_sentences,
)


def load_manifest(path=None) -> dict:
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(resources.files("annotate").joinpath("data/manifest.json").read_text())


def manifest_hash(manifest: dict) -> str:
    return hashlib.sha256(
        json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()


class RuleBackend:
    name = "rule"

    def __init__(self, manifest: dict):
        pinned = manifest.get("backends", {}).get("rule", {})
        wanted = pinned.get("annotate")
        if wanted is not None and wanted != __version__:
            raise AdapterError(
                "manifest", f"rule backend pinned to annotate {wanted}, running {__version__}"
            )

    def annotate(self, text: str) -> dict:
        sentences = tokenize_sentences(text)
        if not sentences:
            raise AdapterError("tokenize", "no tokens in input text")
        tags = [tag_sentence(s) for s in sentences]
        sentences, tags, clusters = resolve_pronouns(sentences, tags)
        dep = []
        srl = []
        for si, (toks, tg) in enumerate(zip(sentences, tags)):
            tree = parse_dependencies(toks, tg)
            dep.append({"s": si, "root": tree["root"], "edges": tree["edges"]})
            tuples = []
            for t in extract_srl(toks, tg):
                tuples.append(
                    {
                        "verb": {"s": si, "start": t["verb_start"], "end": t["verb_end"]},
                        "arguments": [
                            {"role": a["role"], "s": si, "start": a["start"], "end": a["end"]}
                            for a in t["arguments"]
                        ],
                        "modifiers": [
                            {"role": m["role"], "s": si, "start": m["start"], "end": m["end"]}
                            for m in t["modifiers"]
                        ],
                    }
                )
            srl.append(tuples)
        return {
            "sentences": [
                [{"text": tok, "pos": pos} for tok, pos in zip(toks, tg)]
                for toks, tg in zip(sentences, tags)
            ],
            "srl": srl,
            "dep": dep,
            "coref": [{"mentions": m} for m in clusters],
        }


class SpacyBackend:
    """Wrapper around external toolkits; never re-implements them."""

    name = "spacy"

    def __init__(self, manifest: dict):
        pinned = manifest.get("backends", {}).get("spacy", {})
        try:
            spacy = importlib.import_module("spacy")
        except ImportError as exc:
            raise AdapterError("load-spacy", "spacy is not installed") from exc
        if pinned.get("spacy") and spacy.__version__ != pinned["spacy"]:
            raise AdapterError(
                "manifest",
                f"spacy pinned to {pinned['spacy']}, found {spacy.__version__}",
            )
        try:
            self.nlp = spacy.load(pinned.get("spacy_model", "en_core_web_sm"))
        except OSError as exc:
            raise AdapterError("load-spacy-model", str(exc)) from exc
        try:
            predictors = importlib.import_module("allennlp.predictors.predictor")
        except ImportError as exc:
            raise AdapterError("load-allennlp", "allennlp is not installed") from exc
        self._predictor_cls = predictors.Predictor
        self._srl_model = pinned.get("allennlp_srl_model")
        self._coref_model = pinned.get("allennlp_coref_model")

    def annotate(self, text: str) -> dict:  # pragma: no cover - needs toolkits
        raise AdapterError(
            "srl",
            "toolkit-backed annotation requires downloaded AllenNLP models; "
            f"pin and fetch {self._srl_model!r} / {self._coref_model!r} first",
        )


BACKENDS = {"rule": RuleBackend, "spacy": SpacyBackend}


def annotate_text(
    text: str,
    answer: str,
    question: str | None = None,
    backend: str = "rule",
    manifest_path=None,
) -> bytes:
    """Annotate one document; returns schema-conformant JSON bytes."""
    if not text or not text.strip():
        raise AdapterError("input", "empty text")
    if backend not in BACKENDS:
        raise AdapterError("input", f"unknown backend {backend!r}")
    manifest = load_manifest(manifest_path)
    engine = BACKENDS[backend](manifest)
    doc = engine.annotate(text)
    doc["answer"] = answer
    doc["question"] = question
    doc["evidence"] = None
    doc["manifest_hash"] = manifest_hash(manifest)
    doc["backend"] = backend
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
