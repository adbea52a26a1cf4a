"""Vowel tables, telex round-trips, and syllable grammar."""

import numpy as np
import pytest

from vsec import chars, grammar, telex


class TestVowelTables:
    def test_decompose_compose_roundtrip(self):
        for ch in sorted(chars.VOWEL_CHARS):
            base, mod, tone = chars.decompose(ch)
            assert chars.compose(base, mod, tone) == ch

    def test_strip_and_with_tone_agree(self):
        for ch in sorted(chars.VOWEL_CHARS):
            tone = chars.tone_of(ch)
            bare = chars.strip_tone(ch)
            assert chars.tone_of(bare) == chars.TONE_LEVEL
            assert chars.with_tone(bare, tone) == ch

    def test_non_vowels_rejected(self):
        for ch in "bcdfgjklmnpqstvxzđ19 .":
            assert not chars.is_vowel(ch)
            assert chars.decompose(ch) is None


TELEX_GOLDENS = [
    ("cuar", "của"),
    ("truwowngf", "trường"),
    ("homo", "hôm"),
    ("sawnx", "sẵn"),
    ("sangf", "sàng"),
    ("bacs", "bác"),
    ("ddepj", "đẹp"),
    ("trowif", "trời"),
    ("vieetj", "việt"),
    ("nguwowif", "người"),
]


class TestTelex:
    @pytest.mark.parametrize("keys,rendered", TELEX_GOLDENS)
    def test_standardize_goldens(self, keys, rendered):
        assert telex.standardize_marks(keys, "new") == (rendered, True)

    def test_tone_style_flips_open_glides(self):
        assert telex.standardize_marks("hoaf", "new") == ("hòa", True)
        assert telex.standardize_marks("hoaf", "old") == ("hoà", True)
        assert telex.standardize_marks("tuyr", "new") == ("tủy", True)
        assert telex.standardize_marks("tuyr", "old") == ("tuỷ", True)
        # closed syllables place the tone identically in both styles
        assert telex.standardize_marks("hoanf", "new") == ("hoàn", True)
        assert telex.standardize_marks("hoanf", "old") == ("hoàn", True)

    def test_untypable_input_passes_through(self):
        for junk in ("xyz", "qqq", "bcd", "zzz"):
            rendered, ok = telex.standardize_marks(junk, "new")
            assert not ok
            assert rendered == junk

    def test_full_inventory_roundtrip(self):
        """Every canonical syllable survives to_telex -> standardize."""
        inv = grammar.syllable_inventory("new")
        bad = [s for s in inv
               if telex.standardize_marks(telex.to_telex(s), "new") != (s, True)]
        assert bad == []

    def test_tone_key_is_last(self):
        rng = np.random.default_rng(7)
        sample = rng.choice(sorted(grammar.syllable_inventory("new")),
                            size=2000, replace=False)
        for syl in sample:
            keys = telex.to_telex(syl)
            if grammar.parse_syllable(syl).tone != chars.TONE_LEVEL:
                assert keys[-1] in "sfrxj"


class TestGrammar:
    def test_valid_syllables(self):
        for s in ("ngành", "nghiêng", "giếng", "gì", "gìn", "quyết",
                  "trường", "đẹp", "hôm", "ủy", "a"):
            assert grammar.is_valid_syllable(s), s

    def test_invalid_syllables(self):
        # ngh/gh only precede e/ê/i; c never precedes front vowels; tones on
        # stop finals are restricted; random consonant piles do not parse
        for s in ("nghành", "ghan", "cenh", "nge", "bàc", "xyz",
                  "qqq", "hocc"):
            assert not grammar.is_valid_syllable(s), s

    def test_stop_finals_need_sharp_or_dot(self):
        assert grammar.is_valid_syllable("bác")
        assert grammar.is_valid_syllable("bạc")
        assert not grammar.is_valid_syllable("bàc")
        assert not grammar.is_valid_syllable("bảc")

    def test_canonicalize_moves_tone(self):
        assert grammar.canonicalize("hoà") == "hòa"
        assert grammar.canonicalize("gía") == "giá"
        assert grammar.canonicalize("hòa", style="old") == "hoà"

    def test_parse_gi_family(self):
        # the written i can belong to both the initial and the nucleus
        assert grammar.parse_syllable("giếng").initial == "gi"
        assert grammar.parse_syllable("gì").initial == "gi"
        assert grammar.parse_syllable("giá").nucleus == "a"

    def test_inventory_is_self_canonical(self):
        inv = grammar.syllable_inventory("new")
        assert isinstance(inv, frozenset)
        assert "ngành" in inv and "nghành" not in inv
        assert 15000 < len(inv) < 25000
        rng = np.random.default_rng(3)
        for s in rng.choice(sorted(inv), size=3000, replace=False):
            assert grammar.canonicalize(s) == s

    def test_inventory_styles_disjoint_only_on_open_glides(self):
        new = grammar.syllable_inventory("new")
        old = grammar.syllable_inventory("old")
        assert "hòa" in new and "hoà" not in new
        assert "hoà" in old and "hòa" not in old
        assert "hoàn" in new and "hoàn" in old
