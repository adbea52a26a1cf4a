"""Encoder-decoder network over token ids.

Post-norm residual blocks: x = LN(x + Dropout(Sublayer(x))).  Embeddings are
stored as (d_model, vocab) matrices and the output projection shares that
orientation, so logits are W.T applied to the decoder state.  All parameters
live in a flat name -> ndarray dict; gradients come back under the same names.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..bpe import PAD, BOS, EOS
from . import layers


class NumericError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class Hyperparams:
    d_model: int = 512
    n_layers: int = 3
    n_heads: int = 8
    max_seq_len: int = 200
    dropout: float = 0.1
    learning_rate: float = 3e-4
    batch_size: int = 32

    def __post_init__(self):
        if self.d_model <= 0 or self.d_model % self.n_heads != 0:
            raise ValueError(
                f"d_model {self.d_model} not divisible by {self.n_heads} heads")
        for field in ("n_layers", "n_heads", "max_seq_len", "batch_size"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout {self.dropout} outside [0, 1)")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")

    @property
    def ffn_dim(self):
        return 4 * self.d_model

    def to_dict(self):
        return {"d_model": self.d_model, "n_layers": self.n_layers,
                "n_heads": self.n_heads, "max_seq_len": self.max_seq_len,
                "dropout": self.dropout, "learning_rate": self.learning_rate,
                "batch_size": self.batch_size}


def _attn_names(prefix):
    return [(prefix + k, "attn") for k in
            ("Wq", "bq", "Wk", "bk", "Wv", "bv", "Wo", "bo")]


def param_template(h, vocab_size):
    """Canonical (name, shape, init) list; init is glorot/zeros/ones.

    Order here fixes both RNG consumption during init and the tensor layout
    inside checkpoints.
    """
    d, f = h.d_model, h.ffn_dim
    spec = [("E_src", (d, vocab_size), "glorot"),
            ("E_trg", (d, vocab_size), "glorot")]

    def block(prefix, sublayers):
        for name, kind in sublayers:
            if kind == "attn":
                shape = (d, d) if name.endswith(("Wq", "Wk", "Wv", "Wo")) else (d,)
                spec.append((name, shape, "glorot" if shape == (d, d) else "zeros"))
            elif kind == "ln":
                spec.append((name + ".gamma", (d,), "ones"))
                spec.append((name + ".beta", (d,), "zeros"))
            else:  # ffn
                spec.append((name + ".W1", (d, f), "glorot"))
                spec.append((name + ".b1", (f,), "zeros"))
                spec.append((name + ".W2", (f, d), "glorot"))
                spec.append((name + ".b2", (d,), "zeros"))

    for i in range(h.n_layers):
        p = f"enc.{i}."
        block(p, _attn_names(p + "self_attn."))
        block(p, [(p + "ln1", "ln"), (p + "ffn", "ffn"), (p + "ln2", "ln")])
    for i in range(h.n_layers):
        p = f"dec.{i}."
        block(p, _attn_names(p + "self_attn."))
        block(p, [(p + "ln1", "ln")])
        block(p, _attn_names(p + "cross_attn."))
        block(p, [(p + "ln2", "ln"), (p + "ffn", "ffn"), (p + "ln3", "ln")])
    spec.append(("W", (d, vocab_size), "glorot"))
    return spec


def sinusoidal_encoding(max_len, d_model, dtype):
    pos = np.arange(max_len, dtype=np.float64)[:, None]
    dim = np.arange(0, d_model, 2, dtype=np.float64)
    angles = pos / np.power(10000.0, dim / d_model)
    pe = np.zeros((max_len, d_model), dtype=np.float64)
    pe[:, 0::2] = np.sin(angles)
    pe[:, 1::2] = np.cos(angles[:, : d_model - d_model // 2])
    return pe.astype(dtype)


class ModelParams:
    """Flat tensor store plus the fixed positional table."""

    def __init__(self, hyperparams, vocab_size, tensors, dtype=np.float32):
        self.h = hyperparams
        self.vocab_size = vocab_size
        self.dtype = np.dtype(dtype)
        self.tensors = tensors
        self.names = [name for name, _, _ in param_template(hyperparams, vocab_size)]
        self.pos = sinusoidal_encoding(hyperparams.max_seq_len,
                                       hyperparams.d_model, self.dtype)

    def __getitem__(self, name):
        return self.tensors[name]

    def n_parameters(self):
        return sum(t.size for t in self.tensors.values())


def init_model(h, vocab_size, seed=0, dtype=np.float32):
    rng = np.random.default_rng(seed)
    tensors = {}
    for name, shape, kind in param_template(h, vocab_size):
        if kind == "glorot":
            bound = math.sqrt(6.0 / (shape[0] + shape[1]))
            t = rng.uniform(-bound, bound, size=shape)
        elif kind == "ones":
            t = np.ones(shape)
        else:
            t = np.zeros(shape)
        tensors[name] = t.astype(dtype)
    return ModelParams(h, vocab_size, tensors, dtype)


def _sub(params, prefix, keys):
    return {k: params.tensors[prefix + k] for k in keys}

_ATTN_KEYS = ("Wq", "bq", "Wk", "bk", "Wv", "bv", "Wo", "bo")
_FFN_KEYS = ("W1", "b1", "W2", "b2")


def _embed_fwd(ids, E, params, rng):
    d = params.h.d_model
    x = E.T[ids] * np.asarray(math.sqrt(d), params.dtype) + params.pos[: ids.shape[1]]
    x, mask = layers.dropout_fwd(x, params.h.dropout, rng)
    return x, (ids, mask)


def _embed_bwd(dx, cache, E_shape, params):
    ids, mask = cache
    dx = layers.dropout_bwd(dx, mask)
    dx = dx * np.asarray(math.sqrt(params.h.d_model), dx.dtype)
    dE_t = np.zeros((E_shape[1], E_shape[0]), dtype=dx.dtype)
    np.add.at(dE_t, ids.reshape(-1), dx.reshape(-1, dx.shape[-1]))
    return dE_t.T


def pad_bias(ids, dtype):
    """(B,1,1,T) additive mask hiding PAD key positions."""
    return np.where(ids == PAD, layers.NEG_BIAS, 0.0).astype(dtype)[:, None, None, :]


def causal_bias(t, dtype):
    """(1,1,T,T) additive mask hiding future key positions."""
    m = np.triu(np.full((t, t), layers.NEG_BIAS), k=1).astype(dtype)
    return m[None, None]


def _residual_fwd(x, sub_out, ln_prefix, params, rng):
    y, dmask = layers.dropout_fwd(sub_out, params.h.dropout, rng)
    out, lcache = layers.layer_norm_fwd(
        x + y, params.tensors[ln_prefix + ".gamma"],
        params.tensors[ln_prefix + ".beta"])
    return out, (dmask, lcache)


def _residual_bwd(dout, cache, ln_prefix, grads):
    dmask, lcache = cache
    dsum, dg, db = layers.layer_norm_bwd(dout, lcache)
    grads[ln_prefix + ".gamma"] = dg
    grads[ln_prefix + ".beta"] = db
    return dsum, layers.dropout_bwd(dsum, dmask)


def encoder_fwd(src_ids, params, rng=None):
    h = params.h
    bias = pad_bias(src_ids, params.dtype)
    x, ec = _embed_fwd(src_ids, params.tensors["E_src"], params, rng)
    caches = []
    for i in range(h.n_layers):
        p = f"enc.{i}."
        a, ca = layers.mha_fwd(x, x, _sub(params, p + "self_attn.", _ATTN_KEYS),
                               h.n_heads, bias)
        x, cr1 = _residual_fwd(x, a, p + "ln1", params, rng)
        f, cf = layers.ffn_fwd(x, _sub(params, p + "ffn.", _FFN_KEYS))
        x, cr2 = _residual_fwd(x, f, p + "ln2", params, rng)
        caches.append((ca, cr1, cf, cr2))
    return x, (ec, caches, bias)


def encoder_bwd(dx, cache, params, grads):
    ec, caches, _ = cache
    h = params.h
    for i in reversed(range(h.n_layers)):
        p = f"enc.{i}."
        ca, cr1, cf, cr2 = caches[i]
        dx, dres = _residual_bwd(dx, cr2, p + "ln2", grads)
        df, fgrads = layers.ffn_bwd(dres, cf)
        for k, v in fgrads.items():
            grads[p + "ffn." + k] = v
        dx = dx + df
        dx, dres = _residual_bwd(dx, cr1, p + "ln1", grads)
        dq, dkv, agrads = layers.mha_bwd(dres, ca)
        for k, v in agrads.items():
            grads[p + "self_attn." + k] = v
        dx = dx + dq + dkv
    grads["E_src"] = _embed_bwd(dx, ec, params.tensors["E_src"].shape, params)


def decoder_fwd(trg_ids, h_src, src_bias, params, rng=None):
    h = params.h
    t = trg_ids.shape[1]
    self_bias = causal_bias(t, params.dtype)
    x, ec = _embed_fwd(trg_ids, params.tensors["E_trg"], params, rng)
    caches = []
    for i in range(h.n_layers):
        p = f"dec.{i}."
        a, cs = layers.mha_fwd(x, x, _sub(params, p + "self_attn.", _ATTN_KEYS),
                               h.n_heads, self_bias)
        x, cr1 = _residual_fwd(x, a, p + "ln1", params, rng)
        a, cc = layers.mha_fwd(x, h_src, _sub(params, p + "cross_attn.", _ATTN_KEYS),
                               h.n_heads, src_bias)
        x, cr2 = _residual_fwd(x, a, p + "ln2", params, rng)
        f, cf = layers.ffn_fwd(x, _sub(params, p + "ffn.", _FFN_KEYS))
        x, cr3 = _residual_fwd(x, f, p + "ln3", params, rng)
        caches.append((cs, cr1, cc, cr2, cf, cr3))
    return x, (ec, caches)


def decoder_bwd(dx, cache, params, grads):
    """Returns dh_src accumulated over every cross-attention sublayer."""
    ec, caches = cache
    h = params.h
    dh_src = None
    for i in reversed(range(h.n_layers)):
        p = f"dec.{i}."
        cs, cr1, cc, cr2, cf, cr3 = caches[i]
        dx, dres = _residual_bwd(dx, cr3, p + "ln3", grads)
        df, fgrads = layers.ffn_bwd(dres, cf)
        for k, v in fgrads.items():
            grads[p + "ffn." + k] = v
        dx = dx + df
        dx, dres = _residual_bwd(dx, cr2, p + "ln2", grads)
        dq, dkv, agrads = layers.mha_bwd(dres, cc)
        for k, v in agrads.items():
            grads[p + "cross_attn." + k] = v
        dx = dx + dq
        dh_src = dkv if dh_src is None else dh_src + dkv
        dx, dres = _residual_bwd(dx, cr1, p + "ln1", grads)
        dq, dkv, agrads = layers.mha_bwd(dres, cs)
        for k, v in agrads.items():
            grads[p + "self_attn." + k] = v
        dx = dx + dq + dkv
    grads["E_trg"] = _embed_bwd(dx, ec, params.tensors["E_trg"].shape, params)
    return dh_src


def pad_batch(seqs, dtype=np.int64):
    width = max(len(s) for s in seqs)
    out = np.full((len(seqs), width), PAD, dtype=dtype)
    for i, s in enumerate(seqs):
        out[i, : len(s)] = s
    return out


def loss_and_grads(batch, params, dropout_rng=None):
    """Mean non-PAD token cross-entropy and gradients for one batch.

    batch is a list of (src_ids, trg_ids) with BOS/EOS already attached.
    Decoder input is trg[:-1], targets trg[1:]; right padding keeps the
    causal mask sufficient.
    """
    if not batch:
        raise ValueError("empty batch")
    limit = params.h.max_seq_len
    src = pad_batch([s[:limit] for s, _ in batch])
    trg_in = pad_batch([t[:-1][:limit] for _, t in batch])
    trg_out = pad_batch([t[1:][: trg_in.shape[1]] for _, t in batch])

    h_src, enc_cache = encoder_fwd(src, params, dropout_rng)
    src_bias = enc_cache[2]
    h_dec, dec_cache = decoder_fwd(trg_in, h_src, src_bias, params, dropout_rng)
    W = params.tensors["W"]
    logits = h_dec @ W

    real = (trg_out != PAD)
    n_real = int(real.sum())
    if n_real == 0:
        raise ValueError("batch has no non-PAD target tokens")
    weights = real.astype(params.dtype) / n_real
    loss, ce_cache = layers.cross_entropy_fwd(logits, trg_out, weights)

    dlogits = layers.cross_entropy_bwd(ce_cache)
    grads = {}
    d = h_dec.shape[-1]
    grads["W"] = h_dec.reshape(-1, d).T @ dlogits.reshape(-1, dlogits.shape[-1])
    dh_dec = dlogits @ W.T
    dh_src = decoder_bwd(dh_dec, dec_cache, params, grads)
    encoder_bwd(dh_src, enc_cache, params, grads)
    return loss, grads


def encode(src_ids, params):
    """Hidden states (len, d_model) for one id sequence, inference mode."""
    ids = np.asarray(src_ids, dtype=np.int64)[None, :]
    h_src, _ = encoder_fwd(ids, params, rng=None)
    return h_src[0]


def decode_step(trg_prefix, h_src, params):
    """Next-token distribution (vocab,) given decoded prefix and encoder states."""
    ids = np.asarray(trg_prefix, dtype=np.int64)[None, :]
    h_dec, _ = decoder_fwd(ids, h_src[None, :, :], None, params, rng=None)
    logits = h_dec[0, -1] @ params.tensors["W"]
    return layers.softmax_last(logits)


def greedy_decode(src_ids, params, max_len=None):
    """Argmax decoding until EOS.  Returns (ids incl. BOS/EOS, truncated)."""
    if max_len is None:
        max_len = params.h.max_seq_len
    max_len = min(max_len, params.h.max_seq_len)
    h_src = encode(src_ids, params)
    out = [BOS]
    for _ in range(max_len - 1):
        probs = decode_step(out, h_src, params)
        nxt = int(np.argmax(probs))
        out.append(nxt)
        if nxt == EOS:
            return out, False
    return out, True
