"""End-to-end correction: text in, corrected text out.

Wires the preprocessor, tokenizer and network together and guards the
tokenizer/model pairing: a checkpoint trained against one vocabulary must
not silently decode through another.
"""

import json
from dataclasses import dataclass

from . import bpe
from .model.checkpoint import load_checkpoint
from .model.network import greedy_decode
from .preprocess import default_preprocessor


@dataclass(frozen=True)
class CorrectionResult:
    source: str          # text the model actually saw, after preprocessing
    output: str
    truncated: bool = False
    contains_unk: bool = False
    empty_input: bool = False


def check_compatible(tokenizer, params, meta=None):
    """Raises ValueError when tokenizer and checkpoint do not match."""
    if len(tokenizer) != params.vocab_size:
        raise ValueError(
            f"tokenizer vocab has {len(tokenizer)} entries but the model "
            f"was trained with vocab_size={params.vocab_size}")
    meta_mode = (meta or {}).get("tokenizer_mode")
    if meta_mode is not None and meta_mode != tokenizer.mode:
        raise ValueError(
            f"tokenizer mode {tokenizer.mode!r} does not match the "
            f"checkpoint's recorded mode {meta_mode!r}")


def load_corrector(tokenizer_path, checkpoint_path):
    """Returns (tokenizer, params) after compatibility checks."""
    tokenizer = bpe.BpeModel.load(tokenizer_path)
    params, _, meta = load_checkpoint(checkpoint_path)
    check_compatible(tokenizer, params, meta)
    return tokenizer, params


def correct(sentence, tokenizer, params, preprocessor=None,
            preprocess=True):
    """Corrects one sentence with greedy decoding.

    The decode budget is 1.5x the source id length, clipped to the model's
    sequence limit; hitting it without EOS sets the truncated flag.
    """
    if preprocess:
        if preprocessor is None:
            preprocessor = default_preprocessor()
        seq = preprocessor.preprocess(sentence if isinstance(sentence, str)
                                      else " ".join(sentence))
        syllables = list(seq)
        source = seq.text
    else:
        syllables = sentence.split() if isinstance(sentence, str) else list(sentence)
        source = " ".join(syllables)
    if not syllables:
        return CorrectionResult(source="", output="", empty_input=True)

    src_ids = bpe.encode(syllables, tokenizer)
    limit = params.h.max_seq_len
    truncated = False
    if len(src_ids) > limit:
        src_ids = src_ids[: limit - 1] + [bpe.EOS]
        truncated = True
    budget = min(int(1.5 * len(src_ids)), limit)
    out_ids, hit_cap = greedy_decode(src_ids, params, max_len=budget)
    unk = bpe.UNK in src_ids or bpe.UNK in out_ids
    output = " ".join(bpe.decode(out_ids, tokenizer))
    return CorrectionResult(source=source, output=output,
                            truncated=truncated or hit_cap,
                            contains_unk=unk)


def correct_file(in_path, out_path, tokenizer, params, fmt="text",
                 preprocessor=None, preprocess=True):
    """Corrects a file line by line; returns summary counts.

    fmt "text": plain sentences in, corrected sentences out.
    fmt "jsonl": rows with a "text" key; a "predict" key is added and all
    other keys (for example "correct") pass through untouched.
    """
    if fmt not in ("text", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    counts = {"lines": 0, "truncated": 0, "unk": 0, "empty": 0}
    with open(in_path, encoding="utf-8") as fin, \
            open(out_path, "w", encoding="utf-8") as fout:
        for lineno, line in enumerate(fin, start=1):
            line = line.rstrip("\n")
            if fmt == "jsonl":
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                    text = row["text"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise ValueError(f"{in_path}:{lineno}: {exc}") from exc
                res = correct(text, tokenizer, params, preprocessor,
                              preprocess)
                row["predict"] = res.output
                fout.write(json.dumps(row, ensure_ascii=False) + "\n")
            else:
                res = correct(line, tokenizer, params, preprocessor,
                              preprocess)
                fout.write(res.output + "\n")
            counts["lines"] += 1
            counts["truncated"] += res.truncated
            counts["unk"] += res.contains_unk
            counts["empty"] += res.empty_input
    return counts
