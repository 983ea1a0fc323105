"""Segment-salience model: hybrid representation, encoder, prediction head.

Parameters live in a flat dict of float64 arrays keyed by dotted names
("surface.w", "enc.0.attn.wq", "head.b", ...). Everything here is pure
numpy; gradients come from the manual backward passes in ``nn``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from podsum.errors import ValidationError
from podsum.features import N_BITS
from podsum.selector import nn

PARAMS_FORMAT = "podsum-selector"
PARAMS_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    d_model: int = 16
    n_layers: int = 2
    n_heads: int = 2
    max_positions: int = 40
    seed: int = 0
    learning_rate: float = 0.1
    epochs: int = 100
    full_batch: bool = False

    def __post_init__(self):
        if self.d_model < 1 or self.n_layers < 1 or self.n_heads < 1:
            raise ValidationError("d_model, n_layers, n_heads must be >= 1")
        if self.d_model % self.n_heads != 0:
            raise ValidationError(
                "d_model %d not divisible by n_heads %d"
                % (self.d_model, self.n_heads)
            )
        if self.max_positions < 1:
            raise ValidationError("max_positions must be >= 1")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")

    def to_dict(self) -> dict:
        return {
            "d_model": self.d_model,
            "n_layers": self.n_layers,
            "n_heads": self.n_heads,
            "max_positions": self.max_positions,
            "seed": self.seed,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "full_batch": self.full_batch,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


_BLOCK_KEYS = (
    ("ln1_g", "ln1.g"), ("ln1_b", "ln1.b"),
    ("ln2_g", "ln2.g"), ("ln2_b", "ln2.b"),
    ("wq", "attn.wq"), ("bq", "attn.bq"),
    ("wk", "attn.wk"), ("bk", "attn.bk"),
    ("wv", "attn.wv"), ("bv", "attn.bv"),
    ("wo", "attn.wo"), ("bo", "attn.bo"),
    ("w1", "ffn.w1"), ("b1", "ffn.b1"),
    ("w2", "ffn.w2"), ("b2", "ffn.b2"),
)


def _block_view(params: dict, layer: int) -> dict:
    prefix = "enc.%d." % layer
    return {short: params[prefix + dotted] for short, dotted in _BLOCK_KEYS}


def init_params(config: ModelConfig, n_surface_bits: int = N_BITS) -> dict:
    """Seed-deterministic initialization; weights N(0, 0.02), biases zero."""
    rng = np.random.default_rng(config.seed)
    d = config.d_model

    def w(*shape):
        return rng.normal(0.0, 0.02, size=shape)

    params = {
        "surface.w": w(n_surface_bits, d),
        "surface.b": np.zeros(d),
        "pos": w(config.max_positions, d),
    }
    for i in range(config.n_layers):
        p = "enc.%d." % i
        params[p + "ln1.g"] = np.ones(d)
        params[p + "ln1.b"] = np.zeros(d)
        params[p + "attn.wq"] = w(d, d)
        params[p + "attn.bq"] = np.zeros(d)
        params[p + "attn.wk"] = w(d, d)
        params[p + "attn.bk"] = np.zeros(d)
        params[p + "attn.wv"] = w(d, d)
        params[p + "attn.bv"] = np.zeros(d)
        params[p + "attn.wo"] = w(d, d)
        params[p + "attn.bo"] = np.zeros(d)
        params[p + "ln2.g"] = np.ones(d)
        params[p + "ln2.b"] = np.zeros(d)
        params[p + "ffn.w1"] = w(d, 4 * d)
        params[p + "ffn.b1"] = np.zeros(4 * d)
        params[p + "ffn.w2"] = w(4 * d, d)
        params[p + "ffn.b2"] = np.zeros(d)
    params["final_ln.g"] = np.ones(d)
    params["final_ln.b"] = np.zeros(d)
    params["head.w"] = w(d, 2)
    params["head.b"] = np.zeros(2)
    return params


def assemble_repr(h_c, surface_bits, position: int, params: dict) -> np.ndarray:
    """Element-wise sum of context, projected surface bits, position row."""
    h_c = np.asarray(h_c, dtype=np.float64)
    bits = np.asarray(surface_bits, dtype=np.float64)
    w, b = params["surface.w"], params["surface.b"]
    pos = params["pos"]
    if h_c.shape != (w.shape[1],):
        raise ValidationError(
            "context vector shape %s, expected (%d,)" % (h_c.shape, w.shape[1])
        )
    if bits.shape != (w.shape[0],):
        raise ValidationError(
            "surface bit vector shape %s, expected (%d,)"
            % (bits.shape, w.shape[0])
        )
    if not 0 <= position < pos.shape[0]:
        raise ValidationError(
            "position %d outside table of %d rows" % (position, pos.shape[0])
        )
    return h_c + (bits @ w + b) + pos[position]


def _assemble_batch(bits, ctx, positions, params):
    """Batched assemble: bits (B,T,S), ctx (B,T,D), positions (B,T) int."""
    return ctx + (bits @ params["surface.w"] + params["surface.b"]) + params["pos"][positions]


def _encoder_stack(x, params, config, with_cache=False):
    caches = []
    for i in range(config.n_layers):
        x, cache = nn.block_forward(x, _block_view(params, i), config.n_heads)
        caches.append(cache)
    out, ln_cache = nn.layer_norm_forward(x, params["final_ln.g"], params["final_ln.b"])
    if with_cache:
        return out, (caches, ln_cache)
    return out


def encoder_forward(reprs, params: dict, config: ModelConfig) -> np.ndarray:
    """Encode a (T, d_model) candidate sequence; returns the same shape."""
    x = np.asarray(reprs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != config.d_model:
        raise ValidationError("expected (T, %d) input, got %s" % (config.d_model, x.shape))
    if x.shape[0] > config.max_positions:
        raise ValidationError(
            "sequence length %d exceeds max_positions %d"
            % (x.shape[0], config.max_positions)
        )
    return _encoder_stack(x[None, :, :], params, config)[0]


def predict_salience(encoded, params: dict) -> float:
    """P(salient) from the 2-way softmax head on one encoded vector."""
    logits = np.asarray(encoded, dtype=np.float64) @ params["head.w"] + params["head.b"]
    probs = nn.softmax(logits)
    return float(probs[1])


def score_candidates(bits, ctx, params: dict, config: ModelConfig) -> np.ndarray:
    """Salience probabilities for one episode's candidate sequence.

    bits: (T, n_bits) 0/1 array; ctx: (T, d_model). Positions are the
    slots 0..T-1 of the candidate sequence.
    """
    bits = np.asarray(bits, dtype=np.float64)
    ctx = np.asarray(ctx, dtype=np.float64)
    t = bits.shape[0]
    if ctx.shape[0] != t:
        raise ValidationError("bits rows %d != context rows %d" % (t, ctx.shape[0]))
    if t > config.max_positions:
        raise ValidationError(
            "candidate count %d exceeds max_positions %d" % (t, config.max_positions)
        )
    positions = np.arange(t)[None, :]
    x = _assemble_batch(bits[None, :, :], ctx[None, :, :], positions, params)
    encoded = _encoder_stack(x, params, config)
    logits = encoded @ params["head.w"] + params["head.b"]
    return nn.softmax(logits, axis=-1)[0, :, 1]


def loss_and_grads(params: dict, bits, ctx, positions, labels, config: ModelConfig):
    """Mean cross-entropy over all B*T candidates, with full gradients.

    bits (B,T,S), ctx (B,T,D), positions (B,T) int, labels (B,T) in {0,1}.
    Returns (loss, grads) where grads matches the param dict keys.
    """
    bits = np.asarray(bits, dtype=np.float64)
    ctx = np.asarray(ctx, dtype=np.float64)
    positions = np.asarray(positions, dtype=np.intp)
    labels = np.asarray(labels, dtype=np.intp)
    b, t = labels.shape
    if t > config.max_positions:
        raise ValidationError(
            "sequence length %d exceeds max_positions %d" % (t, config.max_positions)
        )

    x = _assemble_batch(bits, ctx, positions, params)
    encoded, (block_caches, final_cache) = _encoder_stack(
        x, params, config, with_cache=True
    )
    logits, head_cache = nn.linear_forward(encoded, params["head.w"], params["head.b"])
    probs = nn.softmax(logits, axis=-1)
    n = b * t
    picked = probs[np.arange(b)[:, None], np.arange(t)[None, :], labels]
    loss = float(-np.log(np.maximum(picked, 1e-300)).sum() / n)

    dlogits = probs.copy()
    dlogits[np.arange(b)[:, None], np.arange(t)[None, :], labels] -= 1.0
    dlogits /= n
    dencoded, dhead_w, dhead_b = nn.linear_backward(dlogits, head_cache)
    dx, dfinal_g, dfinal_b = nn.layer_norm_backward(dencoded, final_cache)
    grads = {
        "head.w": dhead_w, "head.b": dhead_b,
        "final_ln.g": dfinal_g, "final_ln.b": dfinal_b,
    }
    for i in reversed(range(config.n_layers)):
        dx, block_grads = nn.block_backward(dx, block_caches[i])
        prefix = "enc.%d." % i
        for short, dotted in _BLOCK_KEYS:
            grads[prefix + dotted] = block_grads[short]

    flat_dx = dx.reshape(n, -1)
    grads["surface.w"] = bits.reshape(n, -1).T @ flat_dx
    grads["surface.b"] = flat_dx.sum(axis=0)
    dpos = np.zeros_like(params["pos"])
    np.add.at(dpos, positions.reshape(-1), flat_dx)
    grads["pos"] = dpos
    return loss, grads


def params_to_json(params: dict, config: ModelConfig) -> str:
    payload = {
        "format": PARAMS_FORMAT,
        "version": PARAMS_VERSION,
        "config": config.to_dict(),
        "params": {k: params[k].tolist() for k in sorted(params)},
    }
    return json.dumps(payload)


def params_from_json(text: str):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("params JSON is malformed: %s" % exc) from exc
    if payload.get("format") != PARAMS_FORMAT:
        raise ValidationError("unrecognized params format %r" % payload.get("format"))
    if payload.get("version") != PARAMS_VERSION:
        raise ValidationError("unsupported params version %r" % payload.get("version"))
    config = ModelConfig.from_dict(payload["config"])
    params = {}
    for name, value in payload["params"].items():
        arr = np.asarray(value, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValidationError("parameter %s has non-finite entries" % name)
        params[name] = arr
    expected = init_params(config, n_surface_bits=params["surface.w"].shape[0])
    if set(params) != set(expected):
        missing = sorted(set(expected) - set(params))
        extra = sorted(set(params) - set(expected))
        raise ValidationError(
            "parameter names do not match config (missing %s, extra %s)"
            % (missing, extra)
        )
    for name, arr in expected.items():
        if params[name].shape != arr.shape:
            raise ValidationError(
                "parameter %s has shape %s, expected %s"
                % (name, params[name].shape, arr.shape)
            )
    return params, config


def save_params(path, params: dict, config: ModelConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(params_to_json(params, config))


def load_params(path):
    with open(path, encoding="utf-8") as fh:
        return params_from_json(fh.read())
