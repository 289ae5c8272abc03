"""Corpus- and sentence-level BLEU with brevity penalty and add-one smoothing
on the higher-order precisions (unigram precision is left raw so that perfect
and disjoint candidates score exactly 100 and 0)."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: Sequence[str], references: Sequence[Sequence[str]], n: int = 4) -> float:
    """BLEU-n on a 0..100 scale for one candidate against its references."""
    if not 1 <= n <= 4:
        raise ValueError(f"n must be in 1..4, got {n}")
    candidate = list(candidate)
    if not candidate:
        return 0.0
    references = [list(r) for r in references]
    if not references:
        raise ValueError("at least one reference is required")

    log_precisions = []
    for k in range(1, n + 1):
        cand_counts = _ngrams(candidate, k)
        max_ref = Counter()
        for ref in references:
            for gram, count in _ngrams(ref, k).items():
                max_ref[gram] = max(max_ref[gram], count)
        matched = sum(min(c, max_ref[g]) for g, c in cand_counts.items())
        total = sum(cand_counts.values())
        if k == 1:
            if matched == 0:
                return 0.0
            p = matched / total
        else:
            p = (matched + 1) / (total + 1)
        log_precisions.append(math.log(p))

    c = len(candidate)
    # closest reference length; ties resolved toward the shorter reference
    r = min((abs(len(ref) - c), len(ref)) for ref in references)[1]
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return bp * math.exp(sum(log_precisions) / n) * 100.0


def corpus_bleu(pairs: Sequence[tuple[Sequence[str], Sequence[Sequence[str]]]], n: int = 4) -> float:
    """Mean sentence-level BLEU-n over (candidate, references) pairs."""
    if not pairs:
        return 0.0
    return sum(bleu(c, refs, n) for c, refs in pairs) / len(pairs)
