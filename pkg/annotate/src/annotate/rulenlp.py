"""Deterministic rule-based NLP stages.

Not a model of English: a compact, fully reproducible stand-in so that the
graph pipeline can be exercised (and fixtures generated) without any external
toolkit. Tags are Penn-style; dependency output is always a valid single-root
tree; SRL emits one tuple per sentence around its main verb.
"""

from __future__ import annotations

import re

_SENT_END = {".", "!", "?"}
_TOKEN_RE = re.compile(r"[A-Za-z0-9$]+(?:[-'][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

_LEXICON = {
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "in": "IN", "on": "IN", "at": "IN", "of": "IN", "near": "IN",
    "with": "IN", "from": "IN", "by": "IN", "for": "IN", "about": "IN",
    "to": "TO", "and": "CC", "or": "CC", "but": "CC",
    "he": "PRP", "she": "PRP", "it": "PRP", "they": "PRP",
    "him": "PRP", "her": "PRP", "them": "PRP", "we": "PRP", "i": "PRP",
    "his": "PRP$", "its": "PRP$", "their": "PRP$",
    "who": "WP", "what": "WP", "where": "WRB", "when": "WRB",
    "why": "WRB", "how": "WRB", "which": "WDT",
    "is": "VBZ", "are": "VBP", "was": "VBD", "were": "VBD", "be": "VB",
    "been": "VBN", "has": "VBZ", "have": "VBP", "had": "VBD",
    "not": "RB", "also": "RB", "very": "RB", "both": "DT",
    "opened": "VBD", "serves": "VBZ", "carried": "VBD", "visited": "VBD",
    "praised": "VBD", "met": "VBD", "left": "VBD", "stood": "VBD",
    "gave": "VBD", "like": "VBP", "likes": "VBZ", "located": "VBN",
    "hosts": "VBZ", "runs": "VBZ", "wrote": "VBD", "founded": "VBD",
    "built": "VBD", "lives": "VBZ", "lived": "VBD", "works": "VBZ",
    "worked": "VBD", "plays": "VBZ", "played": "VBD", "won": "VBD",
    "directed": "VBD", "starred": "VBD",
    "old": "JJ", "new": "JJ", "red": "JJ", "big": "JJ", "small": "JJ",
    "leading": "JJ", "famous": "JJ", "american": "JJ", "native": "JJ",
}


def tokenize_sentences(text: str) -> list[list[str]]:
    """Whitespace/punctuation tokenization, then sentence split on .!? tokens."""
    tokens = _TOKEN_RE.findall(text)
    sentences: list[list[str]] = []
    current: list[str] = []
    for tok in tokens:
        current.append(tok)
        if tok in _SENT_END:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return [s for s in sentences if s]


def tag(token: str) -> str:
    low = token.lower()
    if not any(ch.isalnum() for ch in token):
        return token if token in {".", ",", ":"} else ("." if token in _SENT_END else ",")
    if low in _LEXICON:
        return _LEXICON[low]
    if token[0].isupper():
        return "NNP"
    if low.isdigit():
        return "CD"
    if low.endswith("ly"):
        return "RB"
    if low.endswith("ing"):
        return "VBG"
    if low.endswith("ed"):
        return "VBD"
    if low.endswith("s") and len(low) > 3:
        return "NNS"
    return "NN"


def tag_sentence(tokens: list[str]) -> list[str]:
    return [tag(t) for t in tokens]


def _is_noun(pos: str) -> bool:
    return pos.startswith("NN") or pos == "CD" or pos.startswith("PRP")


def _noun_chain_end(pos: list[str], i: int) -> int:
    """Last index of the contiguous noun chain containing position i."""
    j = i
    while j + 1 < len(pos) and _is_noun(pos[j + 1]) and not pos[j + 1].startswith("PRP"):
        j += 1
    return j


def parse_dependencies(tokens: list[str], pos: list[str]) -> dict:
    """Head-rule parser emitting a valid tree: {"root": int, "edges": [...]}.

    Determiners and adjectives attach forward to their noun-chain head; nouns
    inside a chain attach to the chain's last token; chain heads attach to the
    nearest preceding preposition (pobj) or to the root (nsubj before the
    root verb, dobj after); prepositions, adverbs, punctuation and leftovers
    attach to the root.
    """
    n = len(tokens)
    root = next((i for i, p in enumerate(pos) if p.startswith("VB")), 0)
    edges = []

    def attach(dep: int, head: int, rel: str):
        if dep != root and head != dep:
            edges.append({"head": head, "dep": dep, "rel": rel})
        elif dep != root:
            edges.append({"head": root, "dep": dep, "rel": "dep"})

    for i in range(n):
        if i == root:
            continue
        p = pos[i]
        if p in {"DT", "JJ", "JJR", "JJS", "PRP$", "WDT"}:
            target = next((j for j in range(i + 1, n) if _is_noun(pos[j])), None)
            if target is not None:
                attach(i, _noun_chain_end(pos, target), "det" if p in {"DT", "WDT"} else ("poss" if p == "PRP$" else "amod"))
            else:
                attach(i, root, "dep")
        elif _is_noun(p):
            end = _noun_chain_end(pos, i)
            if end != i and not p.startswith("PRP"):
                attach(i, end, "nn")
                continue
            prep = next((j for j in range(i - 1, -1, -1) if pos[j] in {"IN", "TO"}), None)
            if prep is not None and prep > root:
                attach(i, prep, "pobj")
            elif i < root:
                attach(i, root, "nsubj")
            else:
                attach(i, root, "dobj")
        elif p in {"IN", "TO"}:
            attach(i, root, "prep")
        elif p.startswith("RB"):
            attach(i, root, "advmod")
        elif p.startswith("VB"):
            attach(i, root, "aux" if pos[i] in {"VBZ", "VBP", "VBD"} and i < root else "conj")
        elif p == "CC":
            attach(i, root, "cc")
        elif not any(ch.isalnum() for ch in tokens[i]):
            attach(i, root, "punct")
        else:
            attach(i, root, "dep")
    return {"root": root, "edges": edges}


def extract_srl(tokens: list[str], pos: list[str]) -> list[dict]:
    """One predicate-argument tuple around the sentence's main verb."""
    root = next((i for i, p in enumerate(pos) if p.startswith("VB")), None)
    if root is None:
        return []
    arguments = []
    modifiers = []
    # subject: maximal span of determiners/adjectives/nouns directly before the verb
    lo = root
    while lo - 1 >= 0 and (
        _is_noun(pos[lo - 1]) or pos[lo - 1] in {"DT", "JJ", "PRP$"}
    ):
        lo -= 1
    if lo < root:
        arguments.append({"role": "ARG0", "start": lo, "end": root})
    # skip auxiliaries/participles directly after the root verb
    after = root + 1
    while after < len(tokens) and pos[after].startswith("VB"):
        after += 1
    # object: span up to the first preposition or punctuation
    hi = after
    while hi < len(tokens) and (
        _is_noun(pos[hi]) or pos[hi] in {"DT", "JJ", "PRP$"}
    ):
        hi += 1
    if hi > after:
        arguments.append({"role": "ARG1", "start": after, "end": hi})
    # modifier: first prepositional phrase after the verb
    prep = next((j for j in range(after, len(tokens)) if pos[j] in {"IN", "TO"}), None)
    if prep is not None:
        end = prep + 1
        while end < len(tokens) and (
            _is_noun(pos[end]) or pos[end] in {"DT", "JJ", "PRP$"}
        ):
            end += 1
        if end > prep + 1:
            role = "ARGM-LOC" if tokens[prep].lower() in {"in", "on", "at", "near"} else "ARGM-MNR"
            modifiers.append({"role": role, "start": prep, "end": end})
    return [{"verb_start": root, "verb_end": root + 1, "arguments": arguments, "modifiers": modifiers}]


_PRONOUNS = {"he", "she", "it", "they", "him", "her", "them"}


def resolve_pronouns(sentences: list[list[str]], tags: list[list[str]]):
    """Replace pronoun tokens with the most recent proper-noun chain.

    Returns (new_sentences, new_tags, clusters) where clusters are lists of
    mentions {"s", "start", "end"} over the resolved text (only clusters with
    at least two mentions are kept).
    """
    chains: list[tuple[str, tuple[int, int, int]]] = []  # (key text, location)
    mentions: dict[str, list[tuple[int, int, int]]] = {}
    out_sents: list[list[str]] = []
    out_tags: list[list[str]] = []
    for si, (sent, tg) in enumerate(zip(sentences, tags)):
        new_tokens: list[str] = []
        new_tags: list[str] = []
        i = 0
        while i < len(sent):
            if tg[i] == "NNP":
                j = i
                while j + 1 < len(sent) and tg[j + 1] == "NNP":
                    j += 1
                key = " ".join(t.lower() for t in sent[i : j + 1])
                loc = (si, len(new_tokens), len(new_tokens) + (j - i + 1))
                chains.append((key, loc))
                mentions.setdefault(key, []).append(loc)
                new_tokens.extend(sent[i : j + 1])
                new_tags.extend(tg[i : j + 1])
                i = j + 1
                continue
            if tg[i] == "PRP" and sent[i].lower() in _PRONOUNS and chains:
                key, _ = chains[-1]
                repl_tokens = key.split()
                # reuse the antecedent's surface form (title case from its key
                # is lossy, so look it up from the recorded location)
                a_si, a_lo, a_hi = mentions[key][0]
                source = out_sents[a_si] if a_si < len(out_sents) else new_tokens
                repl_tokens = source[a_lo:a_hi]
                loc = (si, len(new_tokens), len(new_tokens) + len(repl_tokens))
                mentions[key].append(loc)
                new_tokens.extend(repl_tokens)
                new_tags.extend(["NNP"] * len(repl_tokens))
                i += 1
                continue
            new_tokens.append(sent[i])
            new_tags.append(tg[i])
            i += 1
        out_sents.append(new_tokens)
        out_tags.append(new_tags)
    clusters = [
        [{"s": s, "start": a, "end": b} for (s, a, b) in locs]
        for key, locs in mentions.items()
        if len(locs) >= 2
    ]
    return out_sents, out_tags, clusters
