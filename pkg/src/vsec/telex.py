"""Telex typing form: ASCII encoding of Vietnamese diacritics and tones.

to_telex maps a marked syllable to its key sequence (modifier keys inline,
tone key last): "của" -> "cuar", "trường" -> "truwowngf".  standardize_marks
plays the keys back the way a typing tool would and re-places the tone mark
canonically, so "cuar" and the mis-marked "cuả" both come out as "của".
The replay accepts displaced keys ("homo" -> "hôm") because that is how
merged-syllable typos reach us.
"""

from . import chars, grammar

_TONE_KEYS = frozenset(chars.KEY_TONES)


def to_telex(syllable: str) -> str:
    """ASCII telex form of one syllable; non-Vietnamese letters pass through."""
    out = []
    tone = chars.TONE_LEVEL
    for ch in syllable:
        if ch == "đ":
            out.append("dd")
            continue
        d = chars.decompose(ch)
        if d is None:
            out.append(ch)
            continue
        if d[2] != chars.TONE_LEVEL:
            tone = d[2]
        out.append(chars.telex_of_vowel(ch))
    if tone != chars.TONE_LEVEL:
        out.append(chars.TONE_KEYS[tone])
    return "".join(out)


def _is_plain(ch, base):
    d = chars.decompose(ch)
    return d is not None and d[0] == base and d[1] == chars.MOD_NONE


def _replay_keys(telex: str):
    """Simulate a telex typing tool: returns (skeleton chars, tone) or None.

    Keys may sit right after their vowel or displaced toward the end of the
    syllable, as real typing tools allow.  The last tone key wins.
    """
    out = []
    tone = chars.TONE_LEVEL

    def last_vowel_index():
        for k in range(len(out) - 1, -1, -1):
            if chars.is_vowel(out[k]):
                return k
        return -1

    for ch in telex:
        if not ("a" <= ch <= "z"):
            return None
        if ch in _TONE_KEYS and last_vowel_index() >= 0:
            tone = chars.KEY_TONES[ch]
            continue
        if ch == "w":
            # adjacent target first: canonical aw/ow/uw forms
            if out:
                d = chars.decompose(out[-1])
                if d and d[1] == chars.MOD_NONE and d[0] in "aou":
                    mod = chars.MOD_BREVE if d[0] == "a" else chars.MOD_HORN
                    out[-1] = chars.compose(d[0], mod, 0)
                    continue
            # displaced beyond the coda: "thuongw" horns the uo pair
            j = last_vowel_index()
            if (0 < j < len(out) - 1 and _is_plain(out[j], "o")
                    and _is_plain(out[j - 1], "u")):
                out[j - 1] = chars.compose("u", chars.MOD_HORN, 0)
                out[j] = chars.compose("o", chars.MOD_HORN, 0)
                continue
            k = len(out) - 1
            while k >= 0:
                d = chars.decompose(out[k])
                if d and d[1] == chars.MOD_NONE and d[0] in "aou":
                    mod = chars.MOD_BREVE if d[0] == "a" else chars.MOD_HORN
                    out[k] = chars.compose(d[0], mod, 0)
                    break
                k -= 1
            else:
                out.append(chars.compose("u", chars.MOD_HORN, 0))
            continue
        if ch in "aeo":
            # doubling applies the circumflex, adjacent or across a coda,
            # but never across another vowel ("oao" stays literal)
            k = len(out) - 1
            target = -1
            while k >= 0:
                if _is_plain(out[k], ch):
                    target = k
                    break
                if chars.is_vowel(out[k]):
                    break
                k -= 1
            if target >= 0:
                out[target] = chars.compose(ch, chars.MOD_CIRC, 0)
                continue
            out.append(ch)
            continue
        if ch == "d" and out and out[0] == "d":
            out[0] = "đ"
            continue
        out.append(ch)
    return out, tone


def standardize_marks(telex: str, tone_style: str = "new"):
    """Render a telex form as a canonically marked syllable.

    Returns (syllable, True) on success.  If the keys do not produce a
    grammatical syllable the input comes back verbatim with False.
    """
    replayed = _replay_keys(telex)
    if replayed is None:
        return telex, False
    out, tone = replayed
    parts = grammar.parse_skeleton("".join(out), tone)
    if parts is None:
        return telex, False
    return grammar.compose_syllable(parts, tone_style), True


def canonicalize(s: str, tone_style: str = "new"):
    """Canonical tone placement for an already-marked syllable, or None."""
    return grammar.canonicalize(s, tone_style)
