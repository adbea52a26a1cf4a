"""Shared test utilities: synthetic corpora, gradient checking, and
independent alignment oracles used to cross-check the fast implementations."""

import functools

import numpy as np

from vsec.grammar import syllable_inventory
from vsec.model.network import loss_and_grads


def markov_corpus(n_sentences, seed, pool_size=400, min_len=4, max_len=16):
    """Synthetic sentences over a random syllable pool.

    A fixed successor table gives the text bigram structure, so a model can
    actually learn something from it; everything is driven by one seed.
    """
    rng = np.random.default_rng(seed)
    pool = rng.choice(sorted(syllable_inventory()), size=pool_size,
                      replace=False)
    succ = rng.integers(0, pool_size, size=(pool_size, 8))
    sentences = []
    for _ in range(n_sentences):
        i = int(rng.integers(pool_size))
        words = [pool[i]]
        for _ in range(int(rng.integers(min_len - 1, max_len))):
            i = int(succ[i][rng.integers(8)])
            words.append(pool[i])
        sentences.append(" ".join(words))
    return sentences


def gradcheck(params, batch, step=1e-4, per_tensor=3, seed=0):
    """Central finite differences against analytic gradients.

    Samples per_tensor entries from every parameter tensor and returns the
    worst relative error together with the number of entries checked.
    """
    _, grads = loss_and_grads(batch, params)
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_name = None
    checked = 0
    for name in params.names:
        flat = params.tensors[name].reshape(-1)
        gflat = grads[name].reshape(-1)
        picks = rng.choice(flat.size, size=min(per_tensor, flat.size),
                           replace=False)
        for k in picks:
            orig = flat[k]
            flat[k] = orig + step
            up, _ = loss_and_grads(batch, params)
            flat[k] = orig - step
            down, _ = loss_and_grads(batch, params)
            flat[k] = orig
            numeric = (up - down) / (2.0 * step)
            rel = abs(numeric - gflat[k]) / max(abs(numeric), abs(gflat[k]),
                                                1e-8)
            checked += 1
            if rel > worst:
                worst, worst_name = rel, name
    return worst, worst_name, checked


# --- alignment oracles ---------------------------------------------------
# Independent route: recursion over (cost, op-sequence) tuples.  Ops are
# coded substitution=0, deletion=1, insertion=2 so lexicographic order on
# the tuple implements the documented tie-break.

def oracle_align(src, ref):
    src = tuple(src)
    ref = tuple(ref)

    @functools.lru_cache(maxsize=None)
    def best(i, j):
        if i == len(src) and j == len(ref):
            return (0, ())
        options = []
        if i < len(src) and j < len(ref):
            c, ops = best(i + 1, j + 1)
            options.append((c + (src[i] != ref[j]), (0,) + ops))
        if i < len(src):
            c, ops = best(i + 1, j)
            options.append((c + 1, (1,) + ops))
        if j < len(ref):
            c, ops = best(i, j + 1)
            options.append((c + 1, (2,) + ops))
        return min(options)

    _, ops = best(0, 0)
    cols = []
    i = j = 0
    for op in ops:
        if op == 0:
            cols.append((src[i], ref[j]))
            i += 1
            j += 1
        elif op == 1:
            cols.append((src[i], None))
            i += 1
        else:
            cols.append((None, ref[j]))
            j += 1
    return cols


def enumerate_align(src, ref):
    """Exponential enumeration of every alignment; only for tiny inputs."""
    best = None

    def walk(i, j, cost, ops):
        nonlocal best
        if i == len(src) and j == len(ref):
            key = (cost, tuple(ops))
            if best is None or key < best:
                best = key
            return
        if i < len(src) and j < len(ref):
            walk(i + 1, j + 1, cost + (src[i] != ref[j]), ops + [0])
        if i < len(src):
            walk(i + 1, j, cost + 1, ops + [1])
        if j < len(ref):
            walk(i, j + 1, cost + 1, ops + [2])

    walk(0, 0, 0, [])
    return best


def oracle_counts(src, ref, hyp):
    """Three-way column counts built from the oracle alignments."""
    a = oracle_align(src, ref)
    b = oracle_align(src, hyp)
    actual = detected = true_det = true_cor = 0
    x = y = 0
    while x < len(a) or y < len(b):
        if x < len(a) and a[x][0] is None:
            s, r, h = None, a[x][1], None
            x += 1
        elif y < len(b) and b[y][0] is None:
            s, r, h = None, None, b[y][1]
            y += 1
        else:
            s, r = a[x]
            _, h = b[y]
            x += 1
            y += 1
        actual += s != r
        detected += h != s
        true_det += (s != r) and (h != s)
        true_cor += (h != s) and (h == r)
    return actual, detected, true_det, true_cor
