"""Binary checkpoint format.

Layout: magic b"VSEC", uint32 LE version (1), uint32 LE header length, a JSON
header, then raw little-endian float32 tensor payloads in manifest order.  The
header carries hyperparameters, vocab size, optional run metadata, optimizer
scalars, and a tensor manifest of {name, shape, offset} with offsets relative
to the start of the payload section.  Optimizer moments are stored as extra
tensors named adam.m.<param> / adam.v.<param>.
"""

import json

import numpy as np

from .network import Hyperparams, ModelParams, param_template
from .optim import AdamState

MAGIC = b"VSEC"
VERSION = 1


class CheckpointError(ValueError):
    """Malformed file or tensors that do not fit the declared model."""


def save_checkpoint(path, params, adam=None, meta=None):
    names = list(params.names)
    tensors = dict(params.tensors)
    if adam is not None:
        for n in params.names:
            tensors["adam.m." + n] = adam.m[n]
            tensors["adam.v." + n] = adam.v[n]
        names += ["adam.m." + n for n in params.names]
        names += ["adam.v." + n for n in params.names]

    manifest = []
    offset = 0
    for n in names:
        shape = tensors[n].shape
        manifest.append({"name": n, "shape": list(shape), "offset": offset})
        offset += int(np.prod(shape)) * 4

    header = {
        "hyperparams": params.h.to_dict(),
        "vocab_size": params.vocab_size,
        "meta": dict(meta or {}),
        "adam": None if adam is None else {
            "t": adam.t, "beta1": adam.beta1,
            "beta2": adam.beta2, "eps": adam.eps},
        "tensors": manifest,
    }
    blob = json.dumps(header, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.uint32(VERSION).tobytes())
        fh.write(np.uint32(len(blob)).tobytes())
        fh.write(blob)
        for n in names:
            fh.write(np.ascontiguousarray(
                tensors[n], dtype="<f4").tobytes())


def _expected_shapes(h, vocab_size, with_adam):
    shapes = {name: shape for name, shape, _ in param_template(h, vocab_size)}
    if with_adam:
        for name, shape in list(shapes.items()):
            shapes["adam.m." + name] = shape
            shapes["adam.v." + name] = shape
    return shapes


def load_checkpoint(path, dtype=np.float32):
    """Returns (ModelParams, AdamState or None, meta dict)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12 or raw[:4] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint (bad magic)")
    version = int(np.frombuffer(raw[4:8], dtype="<u4")[0])
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    hlen = int(np.frombuffer(raw[8:12], dtype="<u4")[0])
    if len(raw) < 12 + hlen:
        raise CheckpointError(f"{path}: truncated header")
    try:
        header = json.loads(raw[12 : 12 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: unreadable header: {exc}") from exc

    try:
        h = Hyperparams(**header["hyperparams"])
        vocab_size = int(header["vocab_size"])
        manifest = header["tensors"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"{path}: invalid header fields: {exc}") from exc

    adam_info = header.get("adam")
    expected = _expected_shapes(h, vocab_size, adam_info is not None)
    seen = {}
    payload = raw[12 + hlen :]
    for entry in manifest:
        name, shape = entry["name"], tuple(entry["shape"])
        if name not in expected:
            raise CheckpointError(f"{path}: unexpected tensor {name!r}")
        if shape != expected[name]:
            raise CheckpointError(
                f"{path}: tensor {name!r} has shape {shape}, "
                f"expected {expected[name]}")
        count = int(np.prod(shape))
        start = entry["offset"]
        end = start + count * 4
        if end > len(payload):
            raise CheckpointError(f"{path}: tensor {name!r} payload truncated")
        arr = np.frombuffer(payload[start:end], dtype="<f4").reshape(shape)
        seen[name] = arr.astype(dtype)
    missing = set(expected) - set(seen)
    if missing:
        raise CheckpointError(
            f"{path}: missing tensor {sorted(missing)[0]!r}")

    param_names = [name for name, _, _ in param_template(h, vocab_size)]
    params = ModelParams(h, vocab_size,
                         {n: seen[n] for n in param_names}, dtype)
    adam = None
    if adam_info is not None:
        adam = AdamState(params, beta1=adam_info["beta1"],
                         beta2=adam_info["beta2"], eps=adam_info["eps"])
        adam.t = int(adam_info["t"])
        for n in param_names:
            adam.m[n] = seen["adam.m." + n]
            adam.v[n] = seen["adam.v." + n]
    return params, adam, header.get("meta", {})
