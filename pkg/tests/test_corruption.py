"""Synthetic error generation: rule classes, determinism, statistics."""

import json

import numpy as np
import pytest

from vsec.corruption import (OPS, CorruptionConfig, Edit, FusionTable,
                             build_fusion_table, corrupt, default_rules_path,
                             generate_dataset, replay,
                             initial_consonant_candidates,
                             tone_hoi_nga_candidates,
                             final_consonant_candidates,
                             telex_typo_candidates)


class TestRuleClasses:
    def test_initial_consonant_swaps(self):
        assert "lo" in initial_consonant_candidates("no")
        assert "no" in initial_consonant_candidates("lo")
        assert "xương" in initial_consonant_candidates("sương")
        assert "chời" in initial_consonant_candidates("trời")
        assert "giờ" in initial_consonant_candidates("dờ")

    def test_tone_confusion(self):
        assert "nữa" in tone_hoi_nga_candidates("nửa")
        assert "nửa" in tone_hoi_nga_candidates("nữa")
        assert tone_hoi_nga_candidates("ba") == set()

    def test_final_consonant_swaps(self):
        assert "lan" in final_consonant_candidates("lang")
        assert "bắt" in final_consonant_candidates("bắc")

    def test_typo_candidates_include_mark_slips(self):
        cands = telex_typo_candidates("sẵn")
        assert "sãn" in cands     # dropped breve key
        assert "sẳn" in cands     # adjacent tone key
        assert all(c != "sẵn" for c in cands)

    def test_typo_candidates_keep_raw_junk(self):
        # neighbour slips may produce untypable sequences; they stay as the
        # raw key string, which is what a real mistype looks like
        cands = telex_typo_candidates("của")
        assert any(not c.isalpha() or "w" in c or "j" in c or "f" in c
                   or "s" in c or c.isascii() for c in cands)

    def test_candidates_never_contain_original(self, fusion_table):
        rng = np.random.default_rng(5)
        from vsec.grammar import syllable_inventory
        for syl in rng.choice(sorted(syllable_inventory()), size=300,
                              replace=False):
            assert syl not in fusion_table.candidates(syl)


class TestFusionTable:
    def test_pair_lines_are_bidirectional(self, fusion_table):
        assert "trới" in fusion_table.candidates("trời")
        assert "trời" in fusion_table.candidates("trới")
        assert "sướng" in fusion_table.candidates("sương")

    def test_candidates_sorted_and_deterministic(self, fusion_table):
        c1 = fusion_table.candidates("sàng")
        c2 = fusion_table.candidates("sàng")
        assert c1 == c2 == tuple(sorted(c1))

    def test_rule_file_errors_carry_line_numbers(self, tmp_path):
        p = tmp_path / "rules.txt"
        p.write_text("class\tnot_a_real_class\n", encoding="utf-8")
        with pytest.raises(ValueError, match="rules.txt:1"):
            build_fusion_table(str(p))


class TestConfig:
    def test_defaults(self):
        cfg = CorruptionConfig()
        assert cfg.select_rate == 0.08
        assert cfg.op_weights == {"replace": 0.90, "delete": 0.05,
                                  "duplicate": 0.05}

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            CorruptionConfig(select_rate=1.5)

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError):
            CorruptionConfig(op_weights={"replace": 1.0})
        with pytest.raises(ValueError):
            CorruptionConfig(op_weights={"replace": 0.5, "delete": 0.2,
                                         "duplicate": 0.2})


class TestCorrupt:
    def test_deterministic_per_seed_and_index(self, fusion_table):
        cfg = CorruptionConfig(seed=11)
        sent = "hôm nay trời đẹp lắm".split()
        a = corrupt(sent, fusion_table, cfg, index=3)
        b = corrupt(sent, fusion_table, cfg, index=3)
        c = corrupt(sent, fusion_table, cfg, index=4)
        assert a == b
        assert a.target == c.target  # clean side identical

    def test_replay_reconstructs_corruption(self, fusion_table,
                                            small_corpus):
        cfg = CorruptionConfig(seed=2)
        for i, line in enumerate(small_corpus[:800]):
            rec = corrupt(line, fusion_table, cfg, index=i)
            assert replay(rec.target, rec.edits) == rec.source
            assert [e.target_index for e in rec.edits] == sorted(
                {e.target_index for e in rec.edits})

    def test_edit_ops_are_known(self, fusion_table, small_corpus):
        cfg = CorruptionConfig(seed=2)
        for i, line in enumerate(small_corpus[:200]):
            for e in corrupt(line, fusion_table, cfg, index=i).edits:
                assert e.op in OPS
                if e.op == "replace":
                    assert e.produced != e.original

    def test_statistics_converge(self, fusion_table, small_corpus):
        cfg = CorruptionConfig(seed=8)
        n_tokens = n_edits = 0
        ops = {op: 0 for op in OPS}
        for i, line in enumerate(small_corpus):
            rec = corrupt(line, fusion_table, cfg, index=i)
            n_tokens += len(rec.target)
            n_edits += len(rec.edits)
            for e in rec.edits:
                ops[e.op] += 1
        assert n_tokens > 15000
        rate = n_edits / n_tokens
        assert abs(rate - 0.08) < 0.015
        total = sum(ops.values())
        assert abs(ops["replace"] / total - 0.90) < 0.03
        assert abs(ops["delete"] / total - 0.05) < 0.03
        assert abs(ops["duplicate"] / total - 0.05) < 0.03


class TestDatasetFile:
    def test_jsonl_pairs(self, fusion_table, small_corpus, tmp_path):
        out = tmp_path / "pairs.jsonl"
        cfg = CorruptionConfig(seed=1)
        n = generate_dataset(small_corpus[:50], fusion_table, cfg, str(out))
        assert n == 50
        rows = [json.loads(l) for l in out.read_text(
            encoding="utf-8").splitlines()]
        assert len(rows) == 50
        for row, line in zip(rows, small_corpus):
            assert row["correct"] == line
            assert set(row) == {"text", "correct"}

    def test_regeneration_is_identical(self, fusion_table, small_corpus,
                                       tmp_path):
        cfg = CorruptionConfig(seed=1)
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        generate_dataset(small_corpus[:100], fusion_table, cfg, str(a))
        generate_dataset(small_corpus[:100], fusion_table, cfg, str(b))
        assert a.read_bytes() == b.read_bytes()
