"""Sentence normalization pipeline.

Five passes, in order: strip noise, lowercase, standardize diacritic/tone
marks per syllable, split run-together syllables, merge separated fragments.
One input line is treated as one sentence throughout the toolkit.
"""

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import groupby

from . import grammar, telex
from .lexicon import SyllableTrie, UnigramModel, merge_separated, segment_merged

DEFAULT_PUNCT = ".,!?;:()\"'-"


@dataclass(frozen=True)
class SyllableSequence:
    """An ordered, immutable run of normalized syllable tokens."""

    syllables: tuple = ()
    # optional character offsets into the original text, parallel to
    # syllables; populated only when a caller tracks them
    source_span: tuple = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "syllables", tuple(self.syllables))

    def __len__(self):
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def __getitem__(self, i):
        return self.syllables[i]

    @property
    def empty(self) -> bool:
        return not self.syllables

    @property
    def text(self) -> str:
        return " ".join(self.syllables)


@lru_cache(maxsize=4)
def _inventory_trie(tone_style: str) -> SyllableTrie:
    return SyllableTrie(grammar.syllable_inventory(tone_style))


def _char_class(ch: str) -> str:
    if ch.isalpha():
        return "L"
    if ch.isdigit():
        return "D"
    return "P"


class Preprocessor:
    """Configurable instance of the five-pass pipeline.

    Without a unigram model the split pass keeps unknown tokens whole (an
    empty model can never make a split look better than the whole token).
    """

    def __init__(self, unigram: UnigramModel = None, trie: SyllableTrie = None,
                 tone_style: str = "new", keep_punct: bool = True,
                 punct: str = DEFAULT_PUNCT):
        if tone_style not in ("new", "old"):
            raise ValueError(f"unknown tone style {tone_style!r}")
        self.unigram = unigram if unigram is not None else UnigramModel()
        self.trie = trie if trie is not None else _inventory_trie(tone_style)
        self.tone_style = tone_style
        self.keep_punct = keep_punct
        self.punct = frozenset(punct)

    # pass 1
    def remove_noise(self, text: str) -> str:
        text = unicodedata.normalize("NFC", text)
        kept = []
        for ch in text:
            if ch.isspace():
                kept.append(" ")
            elif ch.isalpha() or ch.isdigit():
                kept.append(ch)
            elif self.keep_punct and ch in self.punct:
                kept.append(ch)
            # anything else (emoji, control chars, stray symbols) drops
        return " ".join("".join(kept).split())

    def tokenize(self, text: str) -> list:
        """Whitespace split, then letter/digit runs and single punctuation
        marks become separate tokens."""
        tokens = []
        for chunk in text.split():
            for cls, run in groupby(chunk, key=_char_class):
                run = "".join(run)
                if cls == "P":
                    tokens.extend(run)
                else:
                    tokens.append(run)
        return tokens

    # pass 3
    def standardize_token(self, token: str) -> str:
        if not token.isalpha():
            return token
        rendered, ok = telex.standardize_marks(telex.to_telex(token),
                                               self.tone_style)
        return rendered if ok else token

    def preprocess(self, text: str) -> SyllableSequence:
        text = self.remove_noise(text)
        text = text.lower()
        tokens = self.tokenize(text)
        tokens = [self.standardize_token(t) for t in tokens]
        split = []
        for t in tokens:
            if t.isalpha() and not grammar.is_valid_syllable(t):
                split.extend(segment_merged(t, self.unigram, self.tone_style))
            else:
                split.append(t)
        merged = merge_separated(split, self.trie)
        return SyllableSequence(tuple(merged))

    def preprocess_file(self, src, dst) -> int:
        """Line-by-line; returns the number of sentences written."""
        n = 0
        with open(src, encoding="utf-8") as fin, \
                open(dst, "w", encoding="utf-8") as fout:
            for line in fin:
                fout.write(self.preprocess(line).text + "\n")
                n += 1
        return n

    def count_unigrams(self, lines) -> UnigramModel:
        """First pass of the two-pass CLI flow: frequency of every valid
        syllable after noise removal, lowercasing and standardization."""
        from collections import Counter
        counts = Counter()
        for line in lines:
            toks = self.tokenize(self.remove_noise(line).lower())
            for t in toks:
                t = self.standardize_token(t)
                if grammar.is_valid_syllable(t):
                    counts[t] += 1
        return UnigramModel(counts)


_DEFAULT = None


def default_preprocessor() -> Preprocessor:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Preprocessor()
    return _DEFAULT


def preprocess_sentence(text: str, pre: Preprocessor = None) -> SyllableSequence:
    return (pre or default_preprocessor()).preprocess(text)
