"""Vietnamese spelling error detection and correction.

The pieces compose in pipeline order: preprocessing normalizes raw text
into syllable sequences, a subword tokenizer maps them to ids, a synthetic
corruptor manufactures (noisy, clean) training pairs, an encoder-decoder
network learns to restore the clean side, and the metrics module scores
detection and correction against references.
"""

from importlib import import_module, resources

from .preprocess import Preprocessor, SyllableSequence, default_preprocessor
from .bpe import BpeModel, train_bpe, encode, decode
from .metrics import MetricsReport, evaluate, evaluate_file

__version__ = "0.1.0"

# numpy-backed names resolve on first use so the CLI can configure BLAS
# thread environment variables before numpy loads
_LAZY = {
    "CorruptionConfig": "corruption", "FusionTable": "corruption",
    "build_fusion_table": "corruption", "corrupt": "corruption",
    "default_rules_path": "corruption", "generate_dataset": "corruption",
    "replay": "corruption",
    "Hyperparams": "model", "init_model": "model", "greedy_decode": "model",
    "load_checkpoint": "model", "save_checkpoint": "model", "train": "model",
    "CorrectionResult": "pipeline", "correct": "pipeline",
    "correct_file": "pipeline", "load_corrector": "pipeline",
}


def __getattr__(name):
    module = _LAZY.get(name)
    if module is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    value = getattr(import_module(f".{module}", __name__), name)
    globals()[name] = value
    return value


def base_config_path():
    """Packaged full-size hyperparameter set (JSON, for `vsec train --config`)."""
    return str(resources.files("vsec.data") / "base_config.json")


__all__ = [
    "Preprocessor", "SyllableSequence", "default_preprocessor",
    "BpeModel", "train_bpe", "encode", "decode",
    "MetricsReport", "evaluate", "evaluate_file",
    "base_config_path", "__version__", *sorted(_LAZY),
]
