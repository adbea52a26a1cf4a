"""Vietnamese syllable grammar: initial + nucleus + final + tone.

The grammar is combinatorial on purpose: `syllable_inventory()` enumerates
initials x nuclei x finals x tones under the orthographic filters below.
It over-generates pronounceable-but-unattested syllables (harmless for a
dictionary trie) but must never reject a real written syllable, since the
preprocessing pipeline re-segments anything it considers invalid.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import chars

# Initials, longest first for greedy matching.  q appears only as qu.
INITIALS = (
    "ngh", "ng", "nh", "gh", "gi", "kh", "ph", "th", "tr", "ch", "qu",
    "b", "c", "d", "đ", "g", "h", "k", "l", "m", "n", "p", "r",
    "s", "t", "v", "x", "",
)

FINALS = ("m", "n", "p", "t", "c", "ng", "nh", "ch", "")

# Written nucleus (tone stripped) -> finals it accepts.  "" = open syllable.
NUCLEUS_FINALS = {
    "a": ("", "m", "n", "p", "t", "c", "ng", "nh", "ch"),
    "ă": ("m", "n", "p", "t", "c", "ng"),
    "â": ("m", "n", "p", "t", "c", "ng"),
    "e": ("", "m", "n", "p", "t", "c", "ng"),
    "ê": ("", "m", "n", "p", "t", "nh", "ch"),
    "i": ("", "m", "n", "p", "t", "nh", "ch"),
    "o": ("", "m", "n", "p", "t", "c", "ng"),
    "ô": ("", "m", "n", "p", "t", "c", "ng"),
    "ơ": ("", "m", "n", "p", "t"),
    "u": ("", "m", "n", "p", "t", "c", "ng"),
    "ư": ("", "m", "n", "t", "c", "ng"),
    "y": ("", "t", "nh"),
    "ai": ("",), "ao": ("",), "au": ("",), "ay": ("",),
    "âu": ("",), "ây": ("",),
    "eo": ("",), "êu": ("",), "iu": ("",),
    "oi": ("",), "ôi": ("",), "ơi": ("",),
    "ui": ("",), "ưi": ("",), "ưu": ("",),
    "ia": ("",), "ua": ("",), "ưa": ("",),
    "uơ": ("",), "uê": ("",),
    "iê": ("m", "n", "p", "t", "c", "ng"),
    "yê": ("m", "n", "t", "ng"),
    "uô": ("m", "n", "t", "c", "ng"),
    "ươ": ("m", "n", "p", "t", "c", "ng"),
    "uâ": ("n", "t", "ng"),
    "oă": ("m", "n", "t", "c", "ng"),
    "oa": ("", "m", "n", "p", "t", "c", "ng", "nh", "ch"),
    "oe": ("", "n", "t"),
    "uy": ("", "n", "p", "t", "nh", "ch"),
    "iêu": ("",), "yêu": ("",),
    "oai": ("",), "oay": ("",), "oao": ("",), "oeo": ("",),
    "uây": ("",), "uôi": ("",), "ươi": ("",), "ươu": ("",),
    "uya": ("",), "uyu": ("",),
    "uyê": ("n", "t"),
}

# Stop finals admit only sắc/nặng.
_STOP_FINALS = frozenset(("c", "ch", "p", "t"))
_STOP_TONES = frozenset((chars.TONE_ACUTE, chars.TONE_DOT))

# Spelling constraints on initial vs first nucleus letter (base form).
_FRONT_EI = frozenset("eêi")       # for gh/ngh
_FRONT_EIY = frozenset("eêiy")     # for k (and banned for c, g, ng)

# Open unmodified glide nuclei whose tone position depends on style.
_STYLE_SENSITIVE = frozenset(("oa", "oe", "uy"))


@dataclass(frozen=True)
class SyllableParts:
    initial: str
    nucleus: str     # tone stripped, modifiers kept ("ươ", "oa", ...)
    final: str
    tone: int


def _nucleus_first_base(nucleus: str) -> str:
    d = chars.decompose(nucleus[0])
    return d[0] if d else nucleus[0]


def _initial_allowed(initial: str, nucleus: str) -> bool:
    first = _nucleus_first_base(nucleus)
    if initial in ("gh", "ngh"):
        return nucleus[0] in _FRONT_EI
    if initial in ("g", "ng"):
        return first not in _FRONT_EIY
    if initial == "k":
        return first in _FRONT_EIY
    if initial == "c":
        return first not in _FRONT_EIY
    if initial == "qu":
        # the glide is already inside qu
        if first == "u":
            return False
        if first == "o" and len(nucleus) > 1:
            return False
    return True


def _check(parts: SyllableParts) -> bool:
    allowed = NUCLEUS_FINALS.get(parts.nucleus)
    if allowed is None or parts.final not in allowed:
        return False
    if not _initial_allowed(parts.initial, parts.nucleus):
        return False
    if parts.final in _STOP_FINALS and parts.tone not in _STOP_TONES:
        return False
    return True


def _split_candidates(skeleton: str):
    """Possible (initial, rest) splits, longest initial first.

    Written "gi" + i-starting nucleus shares the i on the page (gì, gìn,
    giếng); that reading is tried last so that e.g. "giá" stays gi + a.
    """
    out = []
    for init in INITIALS:
        if init and skeleton.startswith(init):
            out.append((init, skeleton[len(init):]))
        elif not init:
            out.append(("", skeleton))
    if skeleton.startswith("gi"):
        out.append(("gi", skeleton[1:]))
    return out


@lru_cache(maxsize=65536)
def parse_skeleton(skeleton: str, tone: int):
    """Parse a tone-stripped skeleton ("truong" with modifiers kept) plus a
    tone index into SyllableParts, or None."""
    for initial, rest in _split_candidates(skeleton):
        if not rest:
            continue
        i = 0
        while i < len(rest) and chars.is_vowel(rest[i]):
            i += 1
        nucleus, final = rest[:i], rest[i:]
        if not nucleus:
            continue
        parts = SyllableParts(initial, nucleus, final, tone)
        if _check(parts):
            return parts
    return None


@lru_cache(maxsize=65536)
def parse_syllable(s: str):
    """Parse a lowercase NFC string into SyllableParts, or None.

    Tone placement is not checked here; any position within the nucleus is
    accepted so that non-canonical input still parses.  Multiple tone marks
    make the string invalid.
    """
    if not s:
        return None
    tone = chars.TONE_LEVEL
    skeleton = []
    for ch in s:
        d = chars.decompose(ch)
        if d is None:
            if ch == "đ" or "a" <= ch <= "z":
                skeleton.append(ch)
                continue
            return None
        base, mod, t = d
        if t != chars.TONE_LEVEL:
            if tone != chars.TONE_LEVEL:
                return None
            tone = t
        skeleton.append(chars.COMPOSE[(base, mod, chars.TONE_LEVEL)])
    return parse_skeleton("".join(skeleton), tone)


def is_valid_syllable(s: str) -> bool:
    return parse_syllable(s) is not None


def tone_position(nucleus: str, final: str, style: str = "new") -> int:
    """Index in the nucleus that carries the tone mark.

    "new" style marks the main vowel ("hòa"); "old" style marks the glide
    second vowel of open oa/oe/uy ("hoà").  Every other nucleus has a
    single legal position.
    """
    mods = [i for i, ch in enumerate(nucleus)
            if chars.decompose(ch)[1] != chars.MOD_NONE]
    if mods:
        return mods[-1]
    if len(nucleus) == 1:
        return 0
    if len(nucleus) == 3:
        return 1
    if final:
        return 1
    if nucleus in _STYLE_SENSITIVE and style == "old":
        return 1
    return 0


def compose_syllable(parts: SyllableParts, style: str = "new") -> str:
    """Render parts with the tone placed canonically."""
    nucleus = parts.nucleus
    if parts.tone != chars.TONE_LEVEL:
        pos = tone_position(nucleus, parts.final, style)
        marked = chars.with_tone(nucleus[pos], parts.tone)
        nucleus = nucleus[:pos] + marked + nucleus[pos + 1:]
    initial = parts.initial
    if initial == "gi" and parts.nucleus[0] == "i":
        initial = "g"
    return initial + nucleus + parts.final


def canonicalize(s: str, style: str = "new"):
    """Re-place the tone mark canonically.  Returns None if s is invalid."""
    parts = parse_syllable(s)
    if parts is None:
        return None
    return compose_syllable(parts, style)


@lru_cache(maxsize=4)
def syllable_inventory(style: str = "new") -> frozenset:
    """Every syllable the grammar generates, canonically marked.

    Surfaces whose re-parse canonicalizes differently are dropped: the
    ambiguous gi+ia reading would otherwise admit "gía" next to "giá".
    """
    out = set()
    for initial in INITIALS:
        for nucleus, finals in NUCLEUS_FINALS.items():
            if not _initial_allowed(initial, nucleus):
                continue
            for final in finals:
                for tone in range(6):
                    if final in _STOP_FINALS and tone not in _STOP_TONES:
                        continue
                    parts = SyllableParts(initial, nucleus, final, tone)
                    s = compose_syllable(parts, style)
                    if canonicalize(s, style) == s:
                        out.add(s)
    return frozenset(out)
