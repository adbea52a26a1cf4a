"""Command line front end.

Subcommands cover the full workflow: preprocess, train-tokenizer, corrupt,
train, correct, evaluate.  Exit codes: 0 success, 1 usage error, 2 bad data
or configuration, 3 numeric failure during training.

Heavy imports stay inside the handlers so --threads can pin the BLAS thread
pool through environment variables before numpy first loads.
"""

import argparse
import json
import logging
import os
import sys

# defaults for `train`; mirrors the network's hyperparameter defaults
TRAIN_DEFAULTS = {
    "embedding_dim": 512,
    "sequence_length": 200,
    "num_heads": 8,
    "num_layers": 3,
    "batch_size": 32,
    "learning_rate": 3e-4,
    "dropout_rate": 0.1,
    "epochs": 10,
    "seed": 0,
}
_INT_KEYS = ("embedding_dim", "sequence_length", "num_heads", "num_layers",
             "batch_size", "epochs", "seed")
_FLOAT_KEYS = ("learning_rate", "dropout_rate")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _set_threads(n):
    if n is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ[var] = str(n)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    out = {}
    for key, value in raw.items():
        if key not in TRAIN_DEFAULTS:
            raise ConfigError(f"{path}: unknown config key {key!r}")
        if key in _INT_KEYS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{path}: {key} must be an integer")
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{path}: {key} must be a number")
            value = float(value)
        out[key] = value
    return out


def _effective_train_config(args):
    """Defaults, then config file, then explicit CLI flags."""
    cfg = dict(TRAIN_DEFAULTS)
    if args.config:
        cfg.update(load_config(args.config))
    for key in TRAIN_DEFAULTS:
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    return cfg


def cmd_preprocess(args):
    from .preprocess import Preprocessor

    first = Preprocessor(tone_style=args.tone_style, keep_punct=not args.drop_punct,
                         punct=args.punct)
    with open(args.input, encoding="utf-8") as fh:
        unigram = first.count_unigrams(fh)
    pre = Preprocessor(unigram=unigram, tone_style=args.tone_style,
                       keep_punct=not args.drop_punct, punct=args.punct)
    n = pre.preprocess_file(args.input, args.output)
    print(f"sentences={n}")
    print(f"unigram_types={len(unigram.counts)}")
    return 0


def cmd_train_tokenizer(args):
    from . import bpe

    with open(args.input, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    model = bpe.train_bpe(lines, args.merges, mode=args.mode)
    model.save(args.output)
    print(f"mode={model.mode}")
    print(f"merges={len(model.merges)}")
    print(f"vocab={len(model)}")
    return 0


def cmd_corrupt(args):
    from .corruption import (CorruptionConfig, build_fusion_table,
                             default_rules_path, generate_dataset)

    rules = args.rules or default_rules_path()
    table = build_fusion_table(rules, tone_style=args.tone_style)
    cfg = CorruptionConfig(select_rate=args.rate, seed=args.seed)
    with open(args.input, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    n = generate_dataset(lines, table, cfg, args.output)
    meta = {"seed": cfg.seed, "select_rate": cfg.select_rate,
            "op_weights": cfg.op_weights, "pairs": n}
    with open(args.output + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    print(f"pairs={n}")
    print(f"seed={cfg.seed}")
    return 0


def cmd_train(args):
    cfg = _effective_train_config(args)
    for key in TRAIN_DEFAULTS:
        print(f"{key}={cfg[key]}")
    _set_threads(args.threads)

    from . import bpe
    from .model.network import Hyperparams
    from .model.training import load_pairs, train

    h = Hyperparams(d_model=cfg["embedding_dim"],
                    n_layers=cfg["num_layers"],
                    n_heads=cfg["num_heads"],
                    max_seq_len=cfg["sequence_length"],
                    dropout=cfg["dropout_rate"],
                    learning_rate=cfg["learning_rate"],
                    batch_size=cfg["batch_size"])
    tokenizer = bpe.BpeModel.load(args.tokenizer)
    pairs, clipped = load_pairs(args.data, tokenizer, h.max_seq_len)
    if clipped:
        print(f"warning: clipped {clipped} overlong pairs", file=sys.stderr)
    train(pairs, len(tokenizer), h, cfg["epochs"], seed=cfg["seed"],
          out_path=args.output,
          meta={"tokenizer_mode": tokenizer.mode, "config": cfg})
    print(f"checkpoint={args.output}")
    return 0


def cmd_correct(args):
    _set_threads(args.threads)

    from .pipeline import correct_file, load_corrector
    from .preprocess import Preprocessor

    tokenizer, params = load_corrector(args.tokenizer, args.checkpoint)
    pre = None
    if not args.no_preprocess:
        pre = Preprocessor(tone_style=args.tone_style)
    counts = correct_file(args.input, args.output, tokenizer, params,
                          fmt=args.format, preprocessor=pre,
                          preprocess=not args.no_preprocess)
    for key, value in counts.items():
        print(f"{key}={value}")
    return 0


def cmd_evaluate(args):
    from .metrics import evaluate_file, write_report

    report = evaluate_file(args.input)
    for key, value in report.to_dict().items():
        if key != "counts":
            print(f"{key}={value:.4f}")
    for key, value in report.counts.to_dict().items():
        print(f"{key}={value}")
    if args.out:
        write_report(report, args.out)
    return 0


def build_parser():
    parser = _Parser(prog="vsec",
                     description="Vietnamese spelling error correction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="clean and standardize a corpus")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--tone-style", choices=("new", "old"), default="new")
    p.add_argument("--drop-punct", action="store_true",
                   help="remove punctuation instead of keeping it as tokens")
    p.add_argument("--punct", default=".,!?;:()\"'-",
                   help="punctuation characters to keep as tokens")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train-tokenizer", help="learn a subword vocabulary")
    p.add_argument("input", help="preprocessed corpus, one sentence per line")
    p.add_argument("output", help="tokenizer model file")
    p.add_argument("--merges", type=int, required=True)
    p.add_argument("--mode", choices=("bpe", "syllable", "char"),
                   default="bpe")
    p.set_defaults(func=cmd_train_tokenizer)

    p = sub.add_parser("corrupt", help="generate synthetic error pairs")
    p.add_argument("input", help="clean preprocessed corpus")
    p.add_argument("output", help="JSONL of {text, correct} pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rate", type=float, default=0.08,
                   help="per-syllable corruption probability")
    p.add_argument("--rules", help="fusion rule file (default: built-in)")
    p.add_argument("--tone-style", choices=("new", "old"), default="new")
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("train", help="train the correction model")
    p.add_argument("data", help="JSONL of {text, correct} pairs")
    p.add_argument("tokenizer")
    p.add_argument("output", help="checkpoint path, rewritten every epoch")
    p.add_argument("--config", help="JSON file of hyperparameters")
    p.add_argument("--embedding-dim", type=int, dest="embedding_dim")
    p.add_argument("--sequence-length", type=int, dest="sequence_length")
    p.add_argument("--num-heads", type=int, dest="num_heads")
    p.add_argument("--num-layers", type=int, dest="num_layers")
    p.add_argument("--batch-size", type=int, dest="batch_size")
    p.add_argument("--learning-rate", type=float, dest="learning_rate")
    p.add_argument("--dropout-rate", type=float, dest="dropout_rate")
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("correct", help="correct sentences with a trained model")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--tokenizer", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--format", choices=("text", "jsonl"), default="text")
    p.add_argument("--no-preprocess", action="store_true",
                   help="feed input tokens to the model as-is")
    p.add_argument("--tone-style", choices=("new", "old"), default="new")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("evaluate", help="score {text, predict, correct} JSONL")
    p.add_argument("input")
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(message)s",
                        stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"vsec: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # covers ConfigError, DataError, CheckpointError, format errors
        print(f"vsec: error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        from .model.network import NumericError
        if isinstance(exc, NumericError):
            print(f"vsec: error: {exc}", file=sys.stderr)
            return 3
        raise


if __name__ == "__main__":
    sys.exit(main())
