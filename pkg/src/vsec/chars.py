"""Vietnamese character tables: vowels decomposed as (base, modifier, tone).

Everything downstream (telex conversion, syllable grammar, tone placement)
works on this decomposition.  Only lowercase NFC forms are registered; the
preprocessing pipeline lowercases and NFC-normalizes before these tables
are consulted.
"""

import unicodedata

# Modifier slots.  "breve" only combines with a, "circ" with a/e/o,
# "horn" with o/u.
MOD_NONE = "none"
MOD_BREVE = "breve"
MOD_CIRC = "circ"
MOD_HORN = "horn"

# Tone indices.  Order is fixed; telex keys below follow it.
TONE_LEVEL = 0
TONE_ACUTE = 1   # sắc
TONE_GRAVE = 2   # huyền
TONE_HOOK = 3    # hỏi
TONE_TILDE = 4   # ngã
TONE_DOT = 5     # nặng

TONE_KEYS = {TONE_ACUTE: "s", TONE_GRAVE: "f", TONE_HOOK: "r",
             TONE_TILDE: "x", TONE_DOT: "j"}
KEY_TONES = {v: k for k, v in TONE_KEYS.items()}

# (base, modifier) -> the six tone forms, tone index 0..5.
_FORMS = {
    ("a", MOD_NONE): "aáàảãạ",
    ("a", MOD_BREVE): "ăắằẳẵặ",
    ("a", MOD_CIRC): "âấầẩẫậ",
    ("e", MOD_NONE): "eéèẻẽẹ",
    ("e", MOD_CIRC): "êếềểễệ",
    ("i", MOD_NONE): "iíìỉĩị",
    ("o", MOD_NONE): "oóòỏõọ",
    ("o", MOD_CIRC): "ôốồổỗộ",
    ("o", MOD_HORN): "ơớờởỡợ",
    ("u", MOD_NONE): "uúùủũụ",
    ("u", MOD_HORN): "ưứừửữự",
    ("y", MOD_NONE): "yýỳỷỹỵ",
}

# char -> (base, modifier, tone)
DECOMPOSE = {}
# (base, modifier, tone) -> char
COMPOSE = {}

for (_base, _mod), _row in _FORMS.items():
    for _tone, _ch in enumerate(_row):
        _ch = unicodedata.normalize("NFC", _ch)
        DECOMPOSE[_ch] = (_base, _mod, _tone)
        COMPOSE[(_base, _mod, _tone)] = _ch

VOWEL_CHARS = frozenset(DECOMPOSE)
BASE_VOWELS = frozenset("aeiouy")

# Telex modifier-key table: how each (base, modifier) is typed.
# Circumflex doubles the base letter, breve/horn use the w key.
MOD_KEY_SUFFIX = {MOD_NONE: "", MOD_CIRC: "<double>", MOD_BREVE: "w",
                  MOD_HORN: "w"}


def is_vowel(ch: str) -> bool:
    return ch in DECOMPOSE


def decompose(ch: str):
    """(base, modifier, tone) for a vowel char, else None."""
    return DECOMPOSE.get(ch)


def compose(base: str, mod: str, tone: int):
    """Inverse of decompose; None for combinations that do not exist."""
    return COMPOSE.get((base, mod, tone))


def strip_tone(ch: str) -> str:
    """Remove the tone mark from a vowel char, keep the modifier."""
    d = DECOMPOSE.get(ch)
    if d is None:
        return ch
    return COMPOSE[(d[0], d[1], TONE_LEVEL)]


def tone_of(ch: str) -> int:
    d = DECOMPOSE.get(ch)
    return d[2] if d else TONE_LEVEL


def with_tone(ch: str, tone: int):
    d = DECOMPOSE.get(ch)
    if d is None:
        return None
    return COMPOSE.get((d[0], d[1], tone))


def telex_of_vowel(ch: str) -> str:
    """ASCII telex key sequence for one vowel char, tone key excluded."""
    base, mod, _ = DECOMPOSE[ch]
    if mod == MOD_CIRC:
        return base + base
    if mod in (MOD_BREVE, MOD_HORN):
        return base + "w"
    return base
