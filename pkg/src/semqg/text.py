"""Shared lexical resources: stopwords, punctuation, POS tag tables."""

from __future__ import annotations

from typing import Iterable, Sequence

# Fixed embedded English stopword list. Deliberately frozen so that graph
# construction is reproducible regardless of any NLP libraries installed.
STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are aren't as at be
    because been before being below between both but by can cannot could
    couldn't did didn't do does doesn't doing don't down during each few for
    from further had hadn't has hasn't have haven't having he he'd he'll he's
    her here here's hers herself him himself his how how's i i'd i'll i'm
    i've if in into is isn't it it's its itself let's me more most mustn't my
    myself no nor not of off on once only or other ought our ours ourselves
    out over own same shan't she she'd she'll she's should shouldn't so some
    such than that that's the their theirs them themselves then there there's
    these they they'd they'll they're they've this those through to too under
    until up very was wasn't we we'd we'll we're we've were weren't what
    what's when when's where where's which while who who's whom why why's
    with won't would wouldn't you you'd you'll you're you've your yours
    yourself yourselves
    """.split()
)

# Penn Treebank tag inventory (word tags plus punctuation tags).
PTB_TAGS = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
    "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ",
    "WDT", "WP", "WP$", "WRB",
    ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "$", "#",
)

PUNCT_TAGS = frozenset({".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP"})

DEFAULT_PRONOUN_TAGS = frozenset({"PRP", "PRP$", "WP", "WP$"})


def is_punctuation_token(token: str) -> bool:
    """A token with no alphanumeric character counts as punctuation."""
    return not any(ch.isalnum() for ch in token)


def is_ignorable(token: str) -> bool:
    """Tokens that carry no content for overlap-style comparisons."""
    return token in STOPWORDS or is_punctuation_token(token)


def content_tokens(tokens: Iterable[str]) -> tuple[str, ...]:
    """Drop stopword and punctuation tokens, keeping order and duplicates."""
    return tuple(t for t in tokens if not is_ignorable(t))


def simple_word_tokens(text: str) -> list[str]:
    """Lowercased whitespace tokenization used for answers and questions."""
    return text.lower().split()


def contiguous_subsequence(needle: Sequence[str], haystack: Sequence[str]) -> bool:
    n, m = len(needle), len(haystack)
    if n == 0 or n > m:
        return False
    return any(tuple(haystack[i : i + n]) == tuple(needle) for i in range(m - n + 1))
