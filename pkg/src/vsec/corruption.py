"""Synthetic spelling-error generation.

A fusion table maps each syllable to the plausible ways Vietnamese typists
break it: fat-fingered telex keys, regional consonant swaps (l/n, s/x,
tr/ch, d/gi/r), the hỏi/ngã tone confusion, and n/ng, c/t final swaps.
Corruption walks a sentence, picks syllables by independent coin flips and
applies replace/delete/duplicate edits, recording enough to replay them.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import chars, grammar, telex
from .preprocess import SyllableSequence

OPS = ("replace", "delete", "duplicate")

QWERTY_NEIGHBORS = {
    "q": "wa", "w": "qes", "e": "wrd", "r": "etf", "t": "ryg",
    "y": "tuh", "u": "yij", "i": "uok", "o": "ipl", "p": "o",
    "a": "qsz", "s": "awdx", "d": "sefc", "f": "drgv", "g": "fthb",
    "h": "gyjn", "j": "hukm", "k": "jil", "l": "ko",
    "z": "ax", "x": "zsc", "c": "xdv", "v": "cfb", "b": "vgn",
    "n": "bhm", "m": "nj",
}

_TONE_KEYS = "sfrxj"
_MARK_KEYS = frozenset(_TONE_KEYS + "w")

_INITIAL_SWAPS = {
    "l": ("n",), "n": ("l",),
    "s": ("x",), "x": ("s",),
    "tr": ("ch",), "ch": ("tr",),
    "d": ("gi", "r"), "gi": ("d", "r"), "r": ("d", "gi"),
}
_FINAL_SWAPS = {"n": ("ng",), "ng": ("n",), "c": ("t",), "t": ("c",)}

RULE_CLASSES = ("telex_typo", "initial_consonant", "tone_hoi_nga",
                "final_consonant")


def _render(telex_form: str, tone_style: str) -> str:
    out, ok = telex.standardize_marks(telex_form, tone_style)
    return out if ok else telex_form


def telex_typo_candidates(syl: str, tone_style: str = "new"):
    """Keyboard slips on the telex form: neighbor substitutions, missed
    modifier/tone keys, and wrong tone keys."""
    tx = telex.to_telex(syl)
    variants = set()
    for i, ch in enumerate(tx):
        for nb in QWERTY_NEIGHBORS.get(ch, ""):
            variants.add(tx[:i] + nb + tx[i + 1:])
        # a missed mark key: only keys that sit after some vowel act as marks
        vowel_before = any(c in "aeiouy" for c in tx[:i])
        if (ch in _MARK_KEYS and vowel_before) or (i > 0 and ch == tx[i - 1]):
            variants.add(tx[:i] + tx[i + 1:])
    if tx and tx[-1] in _TONE_KEYS:
        for k in _TONE_KEYS:
            if k != tx[-1]:
                variants.add(tx[:-1] + k)
    out = set()
    for v in variants:
        if not v:
            continue
        rendered = _render(v, tone_style)
        if rendered and rendered != syl and " " not in rendered:
            out.add(rendered)
    return out


def _swap_parts(syl, attr, table, tone_style):
    parts = grammar.parse_syllable(syl)
    if parts is None:
        return set()
    out = set()
    for repl in table.get(getattr(parts, attr), ()):
        vals = {"initial": parts.initial, "nucleus": parts.nucleus,
                "final": parts.final, "tone": parts.tone, attr: repl}
        rendered = grammar.compose_syllable(grammar.SyllableParts(**vals),
                                            tone_style)
        if rendered != syl and grammar.is_valid_syllable(rendered):
            out.add(rendered)
    return out


def initial_consonant_candidates(syl: str, tone_style: str = "new"):
    return _swap_parts(syl, "initial", _INITIAL_SWAPS, tone_style)


def final_consonant_candidates(syl: str, tone_style: str = "new"):
    return _swap_parts(syl, "final", _FINAL_SWAPS, tone_style)


def tone_hoi_nga_candidates(syl: str, tone_style: str = "new"):
    parts = grammar.parse_syllable(syl)
    if parts is None or parts.tone not in (chars.TONE_HOOK, chars.TONE_TILDE):
        return set()
    other = (chars.TONE_TILDE if parts.tone == chars.TONE_HOOK
             else chars.TONE_HOOK)
    cand = grammar.SyllableParts(parts.initial, parts.nucleus,
                                 parts.final, other)
    rendered = grammar.compose_syllable(cand, tone_style)
    if rendered == syl or not grammar.is_valid_syllable(rendered):
        return set()
    return {rendered}


_CLASS_FUNCS = {
    "telex_typo": telex_typo_candidates,
    "initial_consonant": initial_consonant_candidates,
    "tone_hoi_nga": tone_hoi_nga_candidates,
    "final_consonant": final_consonant_candidates,
}


class FusionTable:
    """syllable -> confusable candidates, built from a rules file.

    Class rules are expanded lazily per queried syllable and cached; the
    result is identical to materializing the whole map up front.
    """

    def __init__(self, pairs=None, classes=(), tone_style="new"):
        self.pairs = {}
        for a, b in (pairs or ()):
            self.pairs.setdefault(a, set()).add(b)
            self.pairs.setdefault(b, set()).add(a)
        for cls in classes:
            if cls not in _CLASS_FUNCS:
                raise ValueError(f"unknown rule class {cls!r}")
        self.classes = tuple(classes)
        self.tone_style = tone_style
        self._cache = {}

    def candidates(self, syl: str):
        """Sorted tuple of candidates for one syllable; never contains syl."""
        hit = self._cache.get(syl)
        if hit is not None:
            return hit
        cands = set(self.pairs.get(syl, ()))
        for cls in self.classes:
            cands |= _CLASS_FUNCS[cls](syl, self.tone_style)
        cands.discard(syl)
        cands = tuple(sorted(cands))
        self._cache[syl] = cands
        return cands

    def entries(self, syllables):
        """Materialized dict view for the given keys."""
        return {s: self.candidates(s) for s in syllables}


def build_fusion_table(path, tone_style="new") -> FusionTable:
    """Rules file: `pair<TAB>syl1<TAB>syl2` or `class<TAB>name` per line."""
    pairs = []
    classes = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if fields[0] == "pair" and len(fields) == 3:
                pairs.append((fields[1], fields[2]))
            elif fields[0] == "class" and len(fields) == 2:
                if fields[1] not in _CLASS_FUNCS:
                    raise ValueError(
                        f"{path}:{lineno}: unknown rule class {fields[1]!r}")
                classes.append(fields[1])
            else:
                raise ValueError(
                    f"{path}:{lineno}: expected 'pair<TAB>a<TAB>b' or "
                    f"'class<TAB>name', got {raw.rstrip()!r}")
    return FusionTable(pairs, classes, tone_style)


def default_rules_path():
    import importlib.resources as res
    return res.files("vsec").joinpath("data/fusion_rules.txt")


@dataclass
class CorruptionConfig:
    select_rate: float = 0.08
    op_weights: dict = field(default_factory=lambda: {
        "replace": 0.90, "delete": 0.05, "duplicate": 0.05})
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.select_rate <= 1.0:
            raise ValueError("select_rate must be within [0, 1]")
        if set(self.op_weights) != set(OPS):
            raise ValueError(f"op_weights must have keys {OPS}")
        total = sum(self.op_weights.values())
        if any(w < 0 for w in self.op_weights.values()) or \
                abs(total - 1.0) > 1e-9:
            raise ValueError("op_weights must be non-negative and sum to 1")


@dataclass(frozen=True)
class Edit:
    target_index: int
    op: str
    original: str
    produced: str = None


@dataclass(frozen=True)
class CorruptionRecord:
    source: SyllableSequence    # corrupted
    target: SyllableSequence    # clean
    edits: tuple


def replay(target, edits) -> SyllableSequence:
    """Apply recorded edits to the clean sequence; must reproduce source."""
    by_index = {e.target_index: e for e in edits}
    out = []
    for i, syl in enumerate(target):
        e = by_index.get(i)
        if e is None:
            out.append(syl)
        elif e.op == "replace":
            out.append(e.produced)
        elif e.op == "duplicate":
            out.append(syl)
            out.append(syl)
        elif e.op == "delete":
            pass
        else:
            raise ValueError(f"unknown op {e.op!r}")
    return SyllableSequence(tuple(out))


def _fallback_candidates(syl, tone_style):
    """Keyboard-neighbor perturbations only, for syllables the table does
    not cover."""
    tx = telex.to_telex(syl)
    out = set()
    for i, ch in enumerate(tx):
        for nb in QWERTY_NEIGHBORS.get(ch, ""):
            rendered = _render(tx[:i] + nb + tx[i + 1:], tone_style)
            if rendered and rendered != syl and " " not in rendered:
                out.add(rendered)
    return tuple(sorted(out))


def corrupt(clean, table: FusionTable, cfg: CorruptionConfig,
            index: int = 0) -> CorruptionRecord:
    """Corrupt one sentence.  Deterministic in (clean, cfg.seed, index):
    each sentence gets its own PCG64 stream."""
    clean = SyllableSequence(tuple(_iter_syllables(clean)))
    rng = np.random.default_rng((cfg.seed, index))
    weights = [cfg.op_weights[op] for op in OPS]
    cum = np.cumsum(weights)
    out = []
    edits = []
    for i, syl in enumerate(clean):
        if rng.random() >= cfg.select_rate:
            out.append(syl)
            continue
        u = rng.random()
        op = OPS[int(np.searchsorted(cum, u, side="right"))]
        if op == "replace":
            cands = table.candidates(syl)
            if not cands:
                cands = _fallback_candidates(syl, table.tone_style)
            if not cands:
                out.append(syl)     # nothing typable; leave untouched
                continue
            pick = cands[int(rng.integers(len(cands)))]
            out.append(pick)
            edits.append(Edit(i, "replace", syl, pick))
        elif op == "delete":
            edits.append(Edit(i, "delete", syl))
        else:
            out.append(syl)
            out.append(syl)
            edits.append(Edit(i, "duplicate", syl, syl))
    return CorruptionRecord(SyllableSequence(tuple(out)), clean, tuple(edits))


def _iter_syllables(sentence):
    if isinstance(sentence, SyllableSequence):
        return sentence.syllables
    if isinstance(sentence, str):
        return sentence.split()
    return tuple(sentence)


def generate_dataset(lines, table, cfg, out_path, start_index=0) -> int:
    """Corrupt an iterable of preprocessed sentences into a parallel JSONL
    file of {"text": corrupted, "correct": clean}.  Returns pair count."""
    n = 0
    with open(out_path, "w", encoding="utf-8") as f:
        for offset, line in enumerate(lines):
            rec = corrupt(line, table, cfg, index=start_index + offset)
            f.write(json.dumps({"text": rec.source.text,
                                "correct": rec.target.text},
                               ensure_ascii=False) + "\n")
            n += 1
    return n
