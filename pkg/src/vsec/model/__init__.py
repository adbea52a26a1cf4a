from .network import (Hyperparams, ModelParams, NumericError, decode_step,
                      encode, greedy_decode, init_model, loss_and_grads)
from .optim import AdamState, adam_step
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .training import DataError, epoch_batches, load_pairs, train

__all__ = [
    "Hyperparams", "ModelParams", "NumericError", "decode_step", "encode",
    "greedy_decode", "init_model", "loss_and_grads", "AdamState", "adam_step",
    "CheckpointError", "load_checkpoint", "save_checkpoint", "DataError",
    "epoch_batches", "load_pairs", "train",
]
