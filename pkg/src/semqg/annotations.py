"""Annotated-document data model, JSON wire format, validation, coreference.

The JSON schema (all spans half-open ``[start, end)``)::

    {
      "sentences": [[{"text": str, "pos": str}, ...], ...],
      "srl": [[{"verb": {"s", "start", "end"},
                "arguments": [{"role", "s", "start", "end"}, ...],
                "modifiers":  [{"role", "s", "start", "end"}, ...]}, ...], ...],
      "dep": [{"s": int, "root": int,
               "edges": [{"head": int, "dep": int, "rel": str}, ...]} | null, ...],
      "coref": [{"mentions": [{"s", "start", "end"}, ...]}, ...],
      "answer": str,
      "question": str | null,
      "evidence": [int] | null
    }

An empty top-level "srl" or "dep" list is accepted as shorthand for "no
annotations" and normalized to one (empty / null) entry per sentence.
Unknown fields are ignored.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, replace

from .errors import ParseError, SchemaError, SemqgWarning
from .text import DEFAULT_PRONOUN_TAGS


@dataclass(frozen=True)
class Token:
    text: str
    pos: str
    sentence_index: int
    token_index: int


@dataclass(frozen=True)
class Span:
    """Half-open token span within one sentence."""

    sentence_index: int
    start: int
    end: int


@dataclass(frozen=True)
class SrlTuple:
    verb: Span
    arguments: tuple[tuple[str, Span], ...] = ()
    modifiers: tuple[tuple[str, Span], ...] = ()


@dataclass(frozen=True)
class DepEdge:
    head: int
    dependent: int
    relation: str


@dataclass(frozen=True)
class DepTree:
    sentence_index: int
    root: int
    edges: tuple[DepEdge, ...]


@dataclass(frozen=True)
class CorefCluster:
    mentions: tuple[Span, ...]


@dataclass(frozen=True)
class AnnotatedDocument:
    sentences: tuple[tuple[Token, ...], ...]
    srl: tuple[tuple[SrlTuple, ...], ...]
    dep: tuple[DepTree | None, ...]
    coref: tuple[CorefCluster, ...]
    answer: str
    gold_question: str | None = None
    evidence_sentences: tuple[int, ...] | None = None

    def sentence_tokens(self, i: int) -> tuple[str, ...]:
        return tuple(t.text for t in self.sentences[i])

    def flat_tokens(self) -> list[str]:
        return [t.text for sent in self.sentences for t in sent]


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


# ---------------------------------------------------------------------------
# parsing


def _require(obj: dict, field: str, path: str = ""):
    if field not in obj:
        raise SchemaError(path + field if path else field)
    return obj[field]


def _parse_span(obj, path: str, role: bool = False):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    s = _require(obj, "s", path + ".")
    start = _require(obj, "start", path + ".")
    end = _require(obj, "end", path + ".")
    if not all(isinstance(v, int) for v in (s, start, end)):
        raise SchemaError(path, "span indices must be integers")
    span = Span(s, start, end)
    if role:
        r = _require(obj, "role", path + ".")
        if not isinstance(r, str):
            raise SchemaError(path + ".role", "must be a string")
        return r, span
    return span


def parse_annotations(raw) -> AnnotatedDocument:
    """Parse annotation JSON bytes (or str) into an :class:`AnnotatedDocument`.

    Raises :class:`ParseError` for malformed JSON (with a byte offset) and
    :class:`SchemaError` for missing or mistyped required fields. Invariant
    violations (bad spans, broken trees, ...) are *not* raised here; they are
    reported by :func:`validate`.
    """
    if isinstance(raw, (bytes, bytearray)):
        text = raw.decode("utf-8", errors="replace")
    else:
        text = raw
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"malformed JSON: {exc.msg}", offset) from exc
    if not isinstance(obj, dict):
        raise SchemaError("<root>", "top level must be an object")

    raw_sentences = _require(obj, "sentences")
    if not isinstance(raw_sentences, list):
        raise SchemaError("sentences", "must be a list")
    sentences = []
    for i, raw_sent in enumerate(raw_sentences):
        if not isinstance(raw_sent, list):
            raise SchemaError(f"sentences[{i}]", "must be a list")
        toks = []
        for j, raw_tok in enumerate(raw_sent):
            if not isinstance(raw_tok, dict):
                raise SchemaError(f"sentences[{i}][{j}]", "must be an object")
            t = _require(raw_tok, "text", f"sentences[{i}][{j}].")
            p = _require(raw_tok, "pos", f"sentences[{i}][{j}].")
            if not isinstance(t, str) or not isinstance(p, str):
                raise SchemaError(f"sentences[{i}][{j}]", "text/pos must be strings")
            toks.append(Token(t, p, i, j))
        sentences.append(tuple(toks))
    n = len(sentences)

    raw_srl = _require(obj, "srl")
    if not isinstance(raw_srl, list):
        raise SchemaError("srl", "must be a list")
    if raw_srl == []:
        srl = [() for _ in range(n)]
    else:
        srl = []
        for i, raw_tuples in enumerate(raw_srl):
            if not isinstance(raw_tuples, list):
                raise SchemaError(f"srl[{i}]", "must be a list")
            tuples = []
            for k, raw_t in enumerate(raw_tuples):
                if not isinstance(raw_t, dict):
                    raise SchemaError(f"srl[{i}][{k}]", "must be an object")
                verb = _parse_span(_require(raw_t, "verb", f"srl[{i}][{k}]."), f"srl[{i}][{k}].verb")
                args = tuple(
                    _parse_span(a, f"srl[{i}][{k}].arguments[{m}]", role=True)
                    for m, a in enumerate(raw_t.get("arguments", []))
                )
                mods = tuple(
                    _parse_span(a, f"srl[{i}][{k}].modifiers[{m}]", role=True)
                    for m, a in enumerate(raw_t.get("modifiers", []))
                )
                tuples.append(SrlTuple(verb, args, mods))
            srl.append(tuple(tuples))

    raw_dep = _require(obj, "dep")
    if not isinstance(raw_dep, list):
        raise SchemaError("dep", "must be a list")
    if raw_dep == []:
        dep = [None for _ in range(n)]
    else:
        dep = []
        for i, raw_tree in enumerate(raw_dep):
            if raw_tree is None:
                dep.append(None)
                continue
            if not isinstance(raw_tree, dict):
                raise SchemaError(f"dep[{i}]", "must be an object or null")
            s = _require(raw_tree, "s", f"dep[{i}].")
            root = _require(raw_tree, "root", f"dep[{i}].")
            raw_edges = _require(raw_tree, "edges", f"dep[{i}].")
            if not isinstance(raw_edges, list):
                raise SchemaError(f"dep[{i}].edges", "must be a list")
            edges = []
            for m, raw_e in enumerate(raw_edges):
                if not isinstance(raw_e, dict):
                    raise SchemaError(f"dep[{i}].edges[{m}]", "must be an object")
                h = _require(raw_e, "head", f"dep[{i}].edges[{m}].")
                d = _require(raw_e, "dep", f"dep[{i}].edges[{m}].")
                r = _require(raw_e, "rel", f"dep[{i}].edges[{m}].")
                edges.append(DepEdge(h, d, r))
            dep.append(DepTree(s, root, tuple(edges)))

    raw_coref = _require(obj, "coref")
    if not isinstance(raw_coref, list):
        raise SchemaError("coref", "must be a list")
    coref = []
    for i, raw_c in enumerate(raw_coref):
        if not isinstance(raw_c, dict):
            raise SchemaError(f"coref[{i}]", "must be an object")
        mentions = tuple(
            _parse_span(m, f"coref[{i}].mentions[{k}]")
            for k, m in enumerate(_require(raw_c, "mentions", f"coref[{i}]."))
        )
        coref.append(CorefCluster(mentions))

    answer = _require(obj, "answer")
    if not isinstance(answer, str):
        raise SchemaError("answer", "must be a string")
    question = obj.get("question")
    if question is not None and not isinstance(question, str):
        raise SchemaError("question", "must be a string or null")
    evidence = obj.get("evidence")
    if evidence is not None:
        if not isinstance(evidence, list) or not all(isinstance(x, int) for x in evidence):
            raise SchemaError("evidence", "must be a list of integers or null")
        evidence = tuple(evidence)

    return AnnotatedDocument(
        sentences=tuple(sentences),
        srl=tuple(srl),
        dep=tuple(dep),
        coref=tuple(coref),
        answer=answer,
        gold_question=question,
        evidence_sentences=evidence,
    )


def _span_obj(span: Span, role: str | None = None) -> dict:
    obj = {"s": span.sentence_index, "start": span.start, "end": span.end}
    if role is not None:
        obj = {"role": role, **obj}
    return obj


def to_json(doc: AnnotatedDocument) -> bytes:
    """Serialize back to the wire schema. ``parse_annotations(to_json(d)) == d``."""
    obj = {
        "sentences": [
            [{"text": t.text, "pos": t.pos} for t in sent] for sent in doc.sentences
        ],
        "srl": [
            [
                {
                    "verb": _span_obj(t.verb),
                    "arguments": [_span_obj(sp, role) for role, sp in t.arguments],
                    "modifiers": [_span_obj(sp, role) for role, sp in t.modifiers],
                }
                for t in tuples
            ]
            for tuples in doc.srl
        ],
        "dep": [
            None
            if tree is None
            else {
                "s": tree.sentence_index,
                "root": tree.root,
                "edges": [
                    {"head": e.head, "dep": e.dependent, "rel": e.relation}
                    for e in tree.edges
                ],
            }
            for tree in doc.dep
        ],
        "coref": [
            {"mentions": [_span_obj(m) for m in c.mentions]} for c in doc.coref
        ],
        "answer": doc.answer,
        "question": doc.gold_question,
        "evidence": list(doc.evidence_sentences) if doc.evidence_sentences is not None else None,
    }
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# validation


def _check_span(span: Span, doc: AnnotatedDocument, path: str, out: list[Violation]):
    if not (0 <= span.sentence_index < len(doc.sentences)):
        out.append(Violation(path, f"sentence index {span.sentence_index} out of range"))
        return
    n = len(doc.sentences[span.sentence_index])
    if not (0 <= span.start < span.end <= n):
        out.append(Violation(path, f"span [{span.start},{span.end}) invalid for sentence of length {n}"))


def validate(doc: AnnotatedDocument) -> list[Violation]:
    """Check every type invariant; returns an empty list iff the document is valid.

    Violations are data, not exceptions: each carries a path into the document
    and a human-readable message.
    """
    out: list[Violation] = []
    for i, sent in enumerate(doc.sentences):
        for j, tok in enumerate(sent):
            path = f"sentences[{i}][{j}]"
            if not tok.text:
                out.append(Violation(path, "empty token text"))
            if tok.sentence_index != i or tok.token_index != j:
                out.append(Violation(path, "token indices disagree with position"))

    if len(doc.srl) != len(doc.sentences):
        out.append(Violation("srl", f"{len(doc.srl)} entries for {len(doc.sentences)} sentences"))
    if len(doc.dep) != len(doc.sentences):
        out.append(Violation("dep", f"{len(doc.dep)} entries for {len(doc.sentences)} sentences"))

    for i, tuples in enumerate(doc.srl):
        if i >= len(doc.sentences):
            break
        for k, t in enumerate(tuples):
            base = f"srl[{i}][{k}]"
            for label, span in [("verb", t.verb)] + [
                (f"arguments[{m}]", sp) for m, (_, sp) in enumerate(t.arguments)
            ] + [(f"modifiers[{m}]", sp) for m, (_, sp) in enumerate(t.modifiers)]:
                if span.sentence_index != i:
                    out.append(Violation(f"{base}.{label}", "span not in its own sentence"))
                _check_span(span, doc, f"{base}.{label}", out)

    for i, tree in enumerate(doc.dep):
        if tree is None or i >= len(doc.sentences):
            continue
        path = f"dep[{i}]"
        n = len(doc.sentences[i])
        if tree.sentence_index != i:
            out.append(Violation(path, "tree not aligned to its sentence"))
        if not (0 <= tree.root < n):
            out.append(Violation(path, f"root {tree.root} out of range"))
            continue
        heads: dict[int, int] = {}
        broken = False
        for e in tree.edges:
            if not (0 <= e.head < n and 0 <= e.dependent < n):
                out.append(Violation(path, f"edge ({e.head},{e.dependent}) out of range"))
                broken = True
                continue
            if e.dependent in heads:
                out.append(Violation(path, f"token {e.dependent} has multiple heads"))
                broken = True
            heads[e.dependent] = e.head
        if broken:
            continue
        if tree.root in heads:
            out.append(Violation(path, "root has a head"))
            continue
        missing = [t for t in range(n) if t != tree.root and t not in heads]
        if missing:
            out.append(Violation(path, f"tokens without a head: {missing}"))
            continue
        # cycle check: walking head pointers must always reach the root
        for start in range(n):
            seen = set()
            t = start
            while t != tree.root:
                if t in seen:
                    out.append(Violation(path, f"cycle through token {t}"))
                    broken = True
                    break
                seen.add(t)
                t = heads[t]
            if broken:
                break

    for i, cluster in enumerate(doc.coref):
        path = f"coref[{i}]"
        if len(cluster.mentions) < 2:
            out.append(Violation(path, f"cluster has {len(cluster.mentions)} mention(s), needs >= 2"))
        for k, m in enumerate(cluster.mentions):
            _check_span(m, doc, f"{path}.mentions[{k}]", out)

    if doc.evidence_sentences is not None:
        for k, idx in enumerate(doc.evidence_sentences):
            if not (0 <= idx < len(doc.sentences)):
                out.append(Violation(f"evidence[{k}]", f"sentence index {idx} out of range"))
    return out


# ---------------------------------------------------------------------------
# coreference resolution


def _doc_order(span: Span) -> tuple[int, int, int]:
    return (span.sentence_index, span.start, span.end)


def _all_pronominal(doc: AnnotatedDocument, span: Span, pronoun_tags) -> bool:
    toks = doc.sentences[span.sentence_index][span.start : span.end]
    return len(toks) > 0 and all(t.pos in pronoun_tags for t in toks)


def resolve_coreference(
    doc: AnnotatedDocument, pronoun_tags=DEFAULT_PRONOUN_TAGS
) -> AnnotatedDocument:
    """Replace purely pronominal mentions with their cluster's representative.

    The representative is the first mention in document order whose tokens are
    not all pronoun-tagged; its tokens (text, POS and casing) are copied
    verbatim. Token positions shift, so every span and tree index in the
    document is re-mapped through a per-sentence offset map. Clusters with no
    non-pronominal mention are left untouched and a warning is recorded.

    Note: existing dependency trees are re-indexed but not re-parsed; a
    substitution that changes a sentence's token count leaves that tree
    covering too few tokens, which :func:`validate` then flags.
    """
    substitutions = []  # (span, replacement tokens)
    for ci, cluster in enumerate(doc.coref):
        ordered = sorted(cluster.mentions, key=_doc_order)
        rep = next(
            (m for m in ordered if not _all_pronominal(doc, m, pronoun_tags)), None
        )
        if rep is None:
            warnings.warn(
                f"coref[{ci}]: no non-pronominal mention; cluster left unchanged",
                SemqgWarning,
                stacklevel=2,
            )
            continue
        rep_tokens = doc.sentences[rep.sentence_index][rep.start : rep.end]
        for m in ordered:
            if _all_pronominal(doc, m, pronoun_tags):
                substitutions.append((m, rep_tokens))
    if not substitutions:
        return doc
    substitutions.sort(key=lambda pair: _doc_order(pair[0]))

    # Per-sentence image maps: img_start[i] / img_end[i] give the half-open
    # range the old token i occupies in the new sentence. All tokens of a
    # substituted mention share the replacement's range, so any span is
    # re-mapped as [img_start[a], img_end[b-1]).
    new_sentences: list[tuple[Token, ...]] = []
    img_start: list[list[int]] = []
    img_end: list[list[int]] = []
    for si, sent in enumerate(doc.sentences):
        subs = [(m, rep) for m, rep in substitutions if m.sentence_index == si]
        prev_end = 0
        for m, _ in subs:
            if m.start < prev_end:
                warnings.warn(
                    f"overlapping coref mentions in sentence {si}; later one skipped",
                    SemqgWarning,
                    stacklevel=2,
                )
            prev_end = max(prev_end, m.end)
        starts = [0] * len(sent)
        ends = [0] * len(sent)
        new_toks: list[Token] = []
        sub_iter = iter(subs)
        current = next(sub_iter, None)
        old = 0
        while old < len(sent):
            if current is not None and old == current[0].start:
                m, rep = current
                repl_start = len(new_toks)
                for rt in rep:
                    new_toks.append(Token(rt.text, rt.pos, si, len(new_toks)))
                for k in range(m.start, m.end):
                    starts[k] = repl_start
                    ends[k] = len(new_toks)
                old = m.end
                current = next(sub_iter, None)
                while current is not None and current[0].start < old:
                    current = next(sub_iter, None)  # overlap: skip
                continue
            starts[old] = len(new_toks)
            tok = sent[old]
            new_toks.append(Token(tok.text, tok.pos, si, len(new_toks)))
            ends[old] = len(new_toks)
            old += 1
        new_sentences.append(tuple(new_toks))
        img_start.append(starts)
        img_end.append(ends)

    def remap_span(span: Span) -> Span:
        if span.sentence_index >= len(img_start) or span.start >= span.end:
            return span
        starts = img_start[span.sentence_index]
        ends = img_end[span.sentence_index]
        if span.start >= len(starts) or span.end - 1 >= len(ends):
            return span
        return Span(span.sentence_index, starts[span.start], ends[span.end - 1])

    def remap_index(si: int, idx: int) -> int:
        if si >= len(img_start) or idx >= len(img_start[si]):
            return idx
        return img_start[si][idx]

    new_srl = tuple(
        tuple(
            SrlTuple(
                verb=remap_span(t.verb),
                arguments=tuple((r, remap_span(sp)) for r, sp in t.arguments),
                modifiers=tuple((r, remap_span(sp)) for r, sp in t.modifiers),
            )
            for t in tuples
        )
        for tuples in doc.srl
    )
    new_dep = tuple(
        None
        if tree is None
        else DepTree(
            tree.sentence_index,
            remap_index(tree.sentence_index, tree.root),
            tuple(
                DepEdge(
                    remap_index(tree.sentence_index, e.head),
                    remap_index(tree.sentence_index, e.dependent),
                    e.relation,
                )
                for e in tree.edges
            ),
        )
        for tree in doc.dep
    )
    new_coref = tuple(
        CorefCluster(tuple(remap_span(m) for m in c.mentions)) for c in doc.coref
    )
    return replace(
        doc,
        sentences=tuple(new_sentences),
        srl=new_srl,
        dep=new_dep,
        coref=new_coref,
    )
