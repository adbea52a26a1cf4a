"""Training loop over (noisy, clean) sentence pairs."""

import json
import logging

import numpy as np

from .. import bpe
from . import optim
from .checkpoint import save_checkpoint
from .network import NumericError, init_model, loss_and_grads

log = logging.getLogger(__name__)


class DataError(ValueError):
    """Unreadable training file."""


def load_pairs(path, tokenizer, max_seq_len):
    """Reads JSONL with "text" (noisy) and "correct" keys into id pairs.

    Sequences longer than max_seq_len after encoding are clipped; the clip
    count is returned so callers can warn.
    """
    pairs = []
    clipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                src = bpe.encode(row["text"], tokenizer)
                trg = bpe.encode(row["correct"], tokenizer)
            except (json.JSONDecodeError, KeyError, AttributeError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if len(src) > max_seq_len or len(trg) > max_seq_len + 1:
                clipped += 1
                src = src[: max_seq_len]
                trg = trg[: max_seq_len + 1]
            pairs.append((src, trg))
    if not pairs:
        raise DataError(f"{path}: no training pairs")
    return pairs, clipped


def epoch_batches(pairs, batch_size, rng):
    """Length-bucketed batches in shuffled order.

    Pairs are sorted by source length so each batch wastes little padding;
    the batch order is then permuted so epochs differ.
    """
    order = sorted(range(len(pairs)), key=lambda i: (len(pairs[i][0]),
                                                     len(pairs[i][1]), i))
    chunks = [order[i : i + batch_size]
              for i in range(0, len(order), batch_size)]
    for ci in rng.permutation(len(chunks)):
        yield [pairs[i] for i in chunks[ci]]


def train(pairs, vocab_size, h, epochs, seed=0, out_path=None, meta=None,
          dtype=np.float32, params=None, adam=None):
    """Runs Adam over the pairs; returns (params, adam, per-epoch mean losses).

    A checkpoint is written to out_path after every epoch so an interrupted
    run keeps its latest finished state.  A non-finite loss aborts with
    NumericError before the parameters are polluted.
    """
    if params is None:
        params = init_model(h, vocab_size, seed=seed, dtype=dtype)
    if adam is None:
        adam = optim.AdamState(params)
    dropout_rng = np.random.default_rng((seed, 1))
    shuffle_rng = np.random.default_rng((seed, 2))
    meta = dict(meta or {}, seed=seed)

    epoch_losses = []
    step = 0
    for epoch in range(1, epochs + 1):
        total = 0.0
        count = 0
        for batch in epoch_batches(pairs, h.batch_size, shuffle_rng):
            loss, grads = loss_and_grads(
                batch, params, dropout_rng if h.dropout > 0 else None)
            if not np.isfinite(loss):
                raise NumericError(
                    f"non-finite loss {loss!r} at epoch {epoch} step {step}")
            optim.adam_step(params, grads, adam, h.learning_rate)
            total += loss
            count += 1
            step += 1
        mean = total / count
        epoch_losses.append(mean)
        log.info("epoch=%d steps=%d mean_loss=%.4f", epoch, step, mean)
        if out_path is not None:
            save_checkpoint(out_path, params, adam,
                            dict(meta, epoch=epoch, mean_loss=mean))
    if out_path is not None and epochs == 0:
        save_checkpoint(out_path, params, adam, dict(meta, epoch=0))
    return params, adam, epoch_losses
