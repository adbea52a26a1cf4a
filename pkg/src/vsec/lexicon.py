"""Frequency lexicon: character trie, unigram counts, and the two syllable
repair passes (splitting merged syllables, merging separated fragments)."""

import math
from collections import Counter

from . import grammar, telex

# Telex forms run longer than rendered syllables ("truwowngf" is 9 keys).
MAX_PIECE_LEN = 10


class TrieNode:
    __slots__ = ("children", "terminal")

    def __init__(self):
        self.children = {}
        self.terminal = False


class SyllableTrie:
    """Prefix tree over syllable strings."""

    def __init__(self, words=()):
        self.root = TrieNode()
        self._size = 0
        for w in words:
            self.insert(w)

    def __len__(self):
        return self._size

    def insert(self, word: str):
        node = self.root
        for ch in word:
            node = node.children.setdefault(ch, TrieNode())
        if not node.terminal:
            node.terminal = True
            self._size += 1

    def contains(self, word: str) -> bool:
        node = self._walk(word)
        return node is not None and node.terminal

    def has_prefix(self, prefix: str) -> bool:
        return self._walk(prefix) is not None

    def _walk(self, s: str):
        node = self.root
        for ch in s:
            node = node.children.get(ch)
            if node is None:
                return None
        return node


class UnigramModel:
    """Syllable frequency model with length-penalized smoothing.

    Unseen tokens get 1 / (total * 10^len), so a long unknown string is
    never worth splitting into short unknown fragments.
    """

    def __init__(self, counts=None):
        self.counts = dict(counts or {})
        self.total = sum(self.counts.values())

    @classmethod
    def from_corpus(cls, sentences):
        """sentences: iterable of syllable lists (or whitespace strings)."""
        c = Counter()
        for sent in sentences:
            if isinstance(sent, str):
                sent = sent.split()
            c.update(sent)
        return cls(c)

    def probability(self, token: str) -> float:
        if not token:
            return 0.0
        n = self.counts.get(token)
        if n:
            return n / self.total
        total = max(self.total, 1)
        return 1.0 / (total * 10.0 ** len(token))

    def log_probability(self, token: str) -> float:
        return math.log(self.probability(token))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            for syl, n in sorted(self.counts.items()):
                f.write(f"{syl}\t{n}\n")

    @classmethod
    def load(cls, path):
        counts = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    syl, n = line.split("\t")
                    counts[syl] = int(n)
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: expected 'syllable<TAB>count', "
                        f"got {line!r}") from None
        return cls(counts)


def _render_piece(piece: str, tone_style: str = "new") -> str:
    """Candidate piece -> standardized syllable when the keys allow it."""
    rendered, ok = telex.standardize_marks(telex.to_telex(piece), tone_style)
    return rendered if ok else piece


def segment_merged(token: str, model: UnigramModel, tone_style: str = "new"):
    """Split a run-together token into syllables by unigram likelihood.

    Dynamic program over prefixes; every candidate piece is standardized
    before lookup so telex-merged input ("homonay") scores as real
    syllables.  Pieces must render to valid syllables: rendering can
    shorten a piece (tone keys collapse into marks), which would otherwise
    let garbage splits outscore the whole token.  Returns the standardized
    pieces; a token that no split can beat comes back whole.
    """
    n = len(token)
    if n == 0:
        return []
    best = [-math.inf] * (n + 1)
    best[0] = 0.0
    back = [0] * (n + 1)
    piece_at = [""] * (n + 1)
    for j in range(1, n + 1):
        for i in range(max(0, j - MAX_PIECE_LEN), j):
            if best[i] == -math.inf:
                continue
            cand = _render_piece(token[i:j], tone_style)
            if not grammar.is_valid_syllable(cand):
                continue
            score = best[i] + model.log_probability(cand)
            if score > best[j]:
                best[j] = score
                back[j] = i
                piece_at[j] = cand
    whole = _render_piece(token, tone_style)
    if best[n] == -math.inf or best[n] <= model.log_probability(whole):
        return [whole]
    pieces = []
    j = n
    while j > 0:
        pieces.append(piece_at[j])
        j = back[j]
    pieces.reverse()
    return pieces


def merge_separated(tokens, trie: SyllableTrie):
    """Greedily concatenate adjacent fragments that spell a trie word.

    Longest match wins; a merge must span at least two tokens.  Tokens that
    do not take part pass through, so the concatenation of the output always
    equals the concatenation of the input.
    """
    out = []
    i = 0
    n = len(tokens)
    while i < n:
        node = trie.root
        best = -1
        j = i
        while j < n:
            for ch in tokens[j]:
                node = node.children.get(ch)
                if node is None:
                    break
            else:
                if node.terminal and j > i:
                    best = j
                j += 1
                continue
            break
        if best >= 0:
            out.append("".join(tokens[i:best + 1]))
            i = best + 1
        else:
            out.append(tokens[i])
            i += 1
    return out
