"""Token and POS vocabularies shared by the encoders and the decoder."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .text import PTB_TAGS

UNK = "<unk>"
SOS = "<sos>"
EOS = "<eos>"
SPECIALS = (UNK, SOS, EOS)


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    index: dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    def __len__(self) -> int:
        return len(self.tokens)

    def id(self, token: str) -> int:
        return self.index.get(token, self.index[UNK])

    def ids(self, tokens: Iterable[str]) -> list[int]:
        return [self.id(t) for t in tokens]

    def token(self, idx: int) -> str:
        return self.tokens[idx]

    @property
    def unk_id(self) -> int:
        return self.index[UNK]

    @property
    def sos_id(self) -> int:
        return self.index[SOS]

    @property
    def eos_id(self) -> int:
        return self.index[EOS]


def build_vocabulary(token_streams: Iterable[Sequence[str]], min_freq: int = 1) -> Vocabulary:
    """Frequency-then-alphabetical vocabulary over lowercased tokens."""
    counts = Counter()
    for stream in token_streams:
        counts.update(t.lower() for t in stream)
    kept = sorted(
        (t for t, c in counts.items() if c >= min_freq and t not in SPECIALS),
        key=lambda t: (-counts[t], t),
    )
    return Vocabulary(tuple(SPECIALS) + tuple(kept))


POS_UNK = "<unk-pos>"
POS_VOCABULARY: tuple[str, ...] = (POS_UNK,) + PTB_TAGS
POS_INDEX = {t: i for i, t in enumerate(POS_VOCABULARY)}


def pos_id(tag: str) -> int:
    return POS_INDEX.get(tag, 0)
