"""Network building blocks as forward/backward function pairs.

Every forward returns (output, cache); the matching backward consumes the
upstream gradient plus that cache and returns input gradients along with a
dict of parameter gradients.  No layer owns state, so inference over shared
parameters is safe from multiple threads.
"""

import numpy as np

NEG_BIAS = -1e9   # additive mask value; exp() underflows to exactly 0


def linear_fwd(x, W, b):
    return x @ W + b, (x, W)


def linear_bwd(dy, cache):
    x, W = cache
    dx = dy @ W.T
    dW = x.reshape(-1, x.shape[-1]).T @ dy.reshape(-1, dy.shape[-1])
    db = dy.reshape(-1, dy.shape[-1]).sum(axis=0)
    return dx, dW, db


def relu_fwd(x):
    y = np.maximum(x, 0)
    return y, (x > 0)


def relu_bwd(dy, cache):
    return dy * cache


def dropout_fwd(x, rate, rng):
    """Inverted dropout; identity when rng is None (inference)."""
    if rng is None or rate <= 0.0:
        return x, None
    mask = (rng.random(x.shape) >= rate).astype(x.dtype) / (1.0 - rate)
    return x * mask, mask


def dropout_bwd(dy, mask):
    if mask is None:
        return dy
    return dy * mask


def layer_norm_fwd(x, gamma, beta, eps=1e-5):
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (x - mu) * inv
    return xhat * gamma + beta, (xhat, inv, gamma)


def layer_norm_bwd(dy, cache):
    xhat, inv, gamma = cache
    d = xhat.shape[-1]
    dxhat = dy * gamma
    dgamma = (dy * xhat).reshape(-1, d).sum(axis=0)
    dbeta = dy.reshape(-1, d).sum(axis=0)
    s1 = dxhat.sum(axis=-1, keepdims=True)
    s2 = (dxhat * xhat).sum(axis=-1, keepdims=True)
    dx = (inv / d) * (d * dxhat - s1 - xhat * s2)
    return dx, dgamma, dbeta


def softmax_last(x):
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _split_heads(x, n_heads):
    b, t, d = x.shape
    return x.reshape(b, t, n_heads, d // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x):
    b, h, t, dk = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, t, h * dk)


def mha_fwd(q_in, kv_in, w, n_heads, bias=None):
    """Multi-head attention.  w holds Wq,bq,Wk,bk,Wv,bv,Wo,bo.

    bias is an additive score mask broadcastable to (B, H, Tq, Tk); masked
    positions carry NEG_BIAS and end up with exactly zero weight.
    """
    Q, cq = linear_fwd(q_in, w["Wq"], w["bq"])
    K, ck = linear_fwd(kv_in, w["Wk"], w["bk"])
    V, cv = linear_fwd(kv_in, w["Wv"], w["bv"])
    dk = q_in.shape[-1] // n_heads
    Qh, Kh, Vh = (_split_heads(t, n_heads) for t in (Q, K, V))
    scores = Qh @ Kh.transpose(0, 1, 3, 2) / np.sqrt(
        np.asarray(dk, dtype=q_in.dtype))
    if bias is not None:
        scores = scores + bias
    attn = softmax_last(scores)
    ctx = _merge_heads(attn @ Vh)
    out, co = linear_fwd(ctx, w["Wo"], w["bo"])
    cache = (cq, ck, cv, co, Qh, Kh, Vh, attn, n_heads)
    return out, cache


def mha_bwd(dout, cache):
    cq, ck, cv, co, Qh, Kh, Vh, attn, n_heads = cache
    dk = Qh.shape[-1]
    dctx, dWo, dbo = linear_bwd(dout, co)
    dctxh = _split_heads(dctx, n_heads)
    dattn = dctxh @ Vh.transpose(0, 1, 3, 2)
    dVh = attn.transpose(0, 1, 3, 2) @ dctxh
    # softmax backward on the last axis
    dscores = attn * (dattn - (dattn * attn).sum(axis=-1, keepdims=True))
    dscores = dscores / np.sqrt(np.asarray(dk, dtype=dscores.dtype))
    dQh = dscores @ Kh
    dKh = dscores.transpose(0, 1, 3, 2) @ Qh
    dQ, dK, dV = (_merge_heads(t) for t in (dQh, dKh, dVh))
    dq_in, dWq, dbq = linear_bwd(dQ, cq)
    dkv_k, dWk, dbk = linear_bwd(dK, ck)
    dkv_v, dWv, dbv = linear_bwd(dV, cv)
    grads = {"Wq": dWq, "bq": dbq, "Wk": dWk, "bk": dbk,
             "Wv": dWv, "bv": dbv, "Wo": dWo, "bo": dbo}
    return dq_in, dkv_k + dkv_v, grads


def ffn_fwd(x, w):
    u, c1 = linear_fwd(x, w["W1"], w["b1"])
    r, cr = relu_fwd(u)
    y, c2 = linear_fwd(r, w["W2"], w["b2"])
    return y, (c1, cr, c2)


def ffn_bwd(dy, cache):
    c1, cr, c2 = cache
    dr, dW2, db2 = linear_bwd(dy, c2)
    du = relu_bwd(dr, cr)
    dx, dW1, db1 = linear_bwd(du, c1)
    return dx, {"W1": dW1, "b1": db1, "W2": dW2, "b2": db2}


def cross_entropy_fwd(logits, targets, weights):
    """Mean CE over positions with weight > 0.

    logits (B,T,V), targets (B,T) int ids, weights (B,T) already divided
    by the number of real tokens.  Returns (loss, dlogits-ready cache).
    """
    shifted = logits - logits.max(axis=-1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=-1))
    logp = np.take_along_axis(shifted, targets[..., None], axis=-1)[..., 0] - lse
    loss = -(logp * weights).sum()
    return float(loss), (shifted, lse, targets, weights)


def cross_entropy_bwd(cache):
    shifted, lse, targets, weights = cache
    probs = np.exp(shifted - lse[..., None])
    dlogits = probs * weights[..., None]
    b, t = targets.shape
    idx_b, idx_t = np.meshgrid(np.arange(b), np.arange(t), indexing="ij")
    dlogits[idx_b, idx_t, targets] -= weights
    return dlogits
