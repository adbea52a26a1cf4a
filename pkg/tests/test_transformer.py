"""Network forward/backward behaviour, masks, and the optimizer."""

import math

import numpy as np
import pytest

from vsec.bpe import BOS, EOS, PAD
from vsec.model import (AdamState, Hyperparams, adam_step, decode_step,
                        encode, greedy_decode, init_model, loss_and_grads)
from vsec.model.network import (causal_bias, decoder_fwd, encoder_fwd,
                                pad_batch, param_template,
                                sinusoidal_encoding)

TINY = Hyperparams(d_model=8, n_layers=1, n_heads=2, max_seq_len=16,
                   dropout=0.0, learning_rate=1e-3, batch_size=4)
V = 12


def tiny_model(seed=0, dtype=np.float64):
    return init_model(TINY, V, seed=seed, dtype=dtype)


def random_pairs(rng, n, lo=3, hi=8):
    out = []
    for _ in range(n):
        src = [BOS] + list(rng.integers(4, V, rng.integers(lo, hi))) + [EOS]
        trg = [BOS] + list(rng.integers(4, V, rng.integers(lo, hi))) + [EOS]
        out.append((src, trg))
    return out


class TestHyperparams:
    def test_head_divisibility_enforced(self):
        with pytest.raises(ValueError, match="heads"):
            Hyperparams(d_model=10, n_heads=3)

    def test_dropout_range(self):
        with pytest.raises(ValueError):
            Hyperparams(dropout=1.0)

    def test_ffn_is_four_wide(self):
        assert Hyperparams(d_model=64).ffn_dim == 256


class TestInit:
    def test_template_covers_all_layer_kinds(self):
        names = [n for n, _, _ in param_template(TINY, V)]
        assert "E_src" in names and "E_trg" in names and "W" in names
        for piece in ("enc.0.self_attn.Wq", "enc.0.ln1.gamma", "enc.0.ffn.W1",
                      "dec.0.self_attn.Wo", "dec.0.cross_attn.Wk",
                      "dec.0.ln3.beta", "dec.0.ffn.b2"):
            assert piece in names, piece

    def test_embeddings_are_d_by_vocab(self):
        p = tiny_model()
        assert p.tensors["E_src"].shape == (TINY.d_model, V)
        assert p.tensors["E_trg"].shape == (TINY.d_model, V)
        assert p.tensors["W"].shape == (TINY.d_model, V)

    def test_glorot_bounds_and_deterministic(self):
        p1 = tiny_model(seed=5)
        p2 = tiny_model(seed=5)
        p3 = tiny_model(seed=6)
        for name in p1.names:
            np.testing.assert_array_equal(p1.tensors[name], p2.tensors[name])
        assert any(not np.array_equal(p1.tensors[n], p3.tensors[n])
                   for n in p1.names)
        W1 = p1.tensors["enc.0.ffn.W1"]
        bound = math.sqrt(6.0 / (W1.shape[0] + W1.shape[1]))
        assert np.max(np.abs(W1)) <= bound
        assert np.all(p1.tensors["enc.0.ln1.gamma"] == 1.0)
        assert np.all(p1.tensors["enc.0.self_attn.bq"] == 0.0)


class TestPositionalEncoding:
    def test_rows_interleave_sin_cos(self):
        pe = sinusoidal_encoding(50, 8, np.float64)
        assert pe.shape == (50, 8)
        np.testing.assert_allclose(pe[0, 0::2], 0.0, atol=1e-12)
        np.testing.assert_allclose(pe[0, 1::2], 1.0, atol=1e-12)
        np.testing.assert_allclose(pe[3, 0], math.sin(3.0), atol=1e-12)
        np.testing.assert_allclose(pe[3, 1], math.cos(3.0), atol=1e-12)

    def test_bounded(self):
        pe = sinusoidal_encoding(200, 64, np.float32)
        assert np.max(np.abs(pe)) <= 1.0 + 1e-6


class TestForward:
    def test_encode_shape(self):
        p = tiny_model()
        h = encode([BOS, 5, 6, 7, EOS], p)
        assert h.shape == (5, TINY.d_model)
        assert np.all(np.isfinite(h))

    def test_decode_step_rows_sum_to_one(self):
        rng = np.random.default_rng(0)
        p = tiny_model(dtype=np.float32)
        for _ in range(50):
            src = [BOS] + list(rng.integers(4, V, 5)) + [EOS]
            prefix = [BOS] + list(rng.integers(4, V, rng.integers(0, 6)))
            probs = decode_step(prefix, encode(src, p), p)
            assert probs.shape == (V,)
            assert abs(float(probs.sum()) - 1.0) < 1e-6
            assert np.all(probs >= 0)

    def test_uniform_logits_give_log_vocab_loss(self):
        p = tiny_model()
        p.tensors["W"][:] = 0.0
        loss, _ = loss_and_grads([([BOS, 5, EOS], [BOS, 6, 7, EOS])], p)
        assert abs(loss - math.log(V)) < 1e-9

    def test_causal_mask_blocks_future(self):
        """Changing a later decoder input must not change earlier logits."""
        p = tiny_model()
        src = pad_batch([[BOS, 4, 5, EOS]])
        h_src, cache = encoder_fwd(src, p)
        bias = cache[2]
        a = pad_batch([[BOS, 6, 7, 8]])
        b = pad_batch([[BOS, 6, 9, 10]])
        ha, _ = decoder_fwd(a, h_src, bias, p)
        hb, _ = decoder_fwd(b, h_src, bias, p)
        np.testing.assert_allclose(ha[0, :2], hb[0, :2], atol=1e-12)
        assert not np.allclose(ha[0, 2:], hb[0, 2:])

    def test_padding_is_invisible_to_real_positions(self):
        """Appending PAD to the source must not change real hidden states."""
        p = tiny_model()
        short = pad_batch([[BOS, 4, 5, EOS]])
        padded = pad_batch([[BOS, 4, 5, EOS, PAD, PAD]])
        h1, _ = encoder_fwd(short, p)
        h2, _ = encoder_fwd(padded, p)
        np.testing.assert_allclose(h1[0], h2[0, :4], atol=1e-12)

    def test_causal_bias_values(self):
        b = causal_bias(3, np.float32)
        assert b.shape == (1, 1, 3, 3)
        assert b[0, 0, 0, 1] < -1e8 and b[0, 0, 1, 0] == 0.0


class TestLoss:
    def test_duplicate_batch_keeps_loss(self):
        rng = np.random.default_rng(1)
        p = tiny_model()
        batch = random_pairs(rng, 3)
        l1, _ = loss_and_grads(batch, p)
        l2, _ = loss_and_grads(batch + batch, p)
        assert abs(l1 - l2) < 1e-9

    def test_pad_targets_do_not_contribute(self):
        """A batch with one short pair scores the same as the pair alone
        when the other pair's targets are fully masked -- checked via the
        per-token normalization."""
        p = tiny_model()
        a = ([BOS, 4, EOS], [BOS, 5, EOS])
        b = ([BOS, 4, 5, 6, EOS], [BOS, 5, 6, 7, 8, EOS])
        la, _ = loss_and_grads([a], p)
        lb, _ = loss_and_grads([b], p)
        lab, _ = loss_and_grads([a, b], p)
        na, nb = 2, 5          # non-PAD target tokens of each pair
        expected = (la * na + lb * nb) / (na + nb)
        assert abs(lab - expected) < 1e-9

    def test_empty_batch_rejected(self):
        with pytest.raises(ValueError):
            loss_and_grads([], tiny_model())

    def test_grads_cover_every_tensor(self):
        rng = np.random.default_rng(2)
        p = tiny_model()
        _, grads = loss_and_grads(random_pairs(rng, 2), p)
        assert set(grads) == set(p.names)
        for g in grads.values():
            assert np.all(np.isfinite(g))


class TestGreedyDecode:
    def test_stops_at_eos_or_budget(self):
        p = tiny_model()
        out, truncated = greedy_decode([BOS, 4, 5, EOS], p, max_len=6)
        assert out[0] == BOS
        assert len(out) <= 6
        assert truncated == (out[-1] != EOS)

    def test_budget_clipped_to_model_limit(self):
        p = tiny_model()
        out, _ = greedy_decode([BOS, 4, EOS], p, max_len=10_000)
        assert len(out) <= TINY.max_seq_len


class TestAdam:
    def test_first_step_matches_closed_form(self):
        """With bias correction the first update is -lr * g / (|g| + eps)."""
        p = tiny_model()
        state = AdamState(p)
        grads = {n: np.ones_like(p.tensors[n]) * 0.5 for n in p.names}
        before = {n: p.tensors[n].copy() for n in p.names}
        adam_step(p, grads, state, lr=0.01)
        for n in p.names:
            expected = before[n] - 0.01 * 0.5 / (0.5 + state.eps)
            np.testing.assert_allclose(p.tensors[n], expected, atol=1e-12)
        assert state.t == 1

    def test_zero_grads_are_a_noop(self):
        p = tiny_model()
        state = AdamState(p)
        grads = {n: np.zeros_like(p.tensors[n]) for n in p.names}
        before = {n: p.tensors[n].copy() for n in p.names}
        adam_step(p, grads, state, lr=0.1)
        for n in p.names:
            np.testing.assert_array_equal(p.tensors[n], before[n])

    def test_two_identical_runs_agree(self):
        rng1 = np.random.default_rng(3)
        rng2 = np.random.default_rng(3)
        results = []
        for rng in (rng1, rng2):
            p = tiny_model(seed=7)
            state = AdamState(p)
            for _ in range(5):
                loss, grads = loss_and_grads(random_pairs(rng, 2), p)
                adam_step(p, grads, state, TINY.learning_rate)
            results.append(loss)
        assert results[0] == results[1]
