"""Dense / layer-norm / attention primitives with manual backprop.

All functions take and return float64 numpy arrays. Forward passes return
(output, cache); backward passes consume the upstream gradient plus the
cache and return input and parameter gradients. Shapes are batched as
(B, T, D) throughout.
"""

from __future__ import annotations

import math

import numpy as np

LN_EPS = 1e-5
_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_A = 0.044715


def linear_forward(x, w, b):
    return x @ w + b, (x, w)


def linear_backward(dout, cache):
    x, w = cache
    dx = dout @ w.T
    din, dout_dim = w.shape
    dw = x.reshape(-1, din).T @ dout.reshape(-1, dout_dim)
    db = dout.reshape(-1, dout_dim).sum(axis=0)
    return dx, dw, db


def layer_norm_forward(x, gain, bias):
    mu = x.mean(axis=-1, keepdims=True)
    centered = x - mu
    var = (centered * centered).mean(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + LN_EPS)
    x_hat = centered * inv_std
    return x_hat * gain + bias, (x_hat, inv_std, gain)


def layer_norm_backward(dout, cache):
    x_hat, inv_std, gain = cache
    flat = dout.reshape(-1, dout.shape[-1])
    dgain = (flat * x_hat.reshape(-1, x_hat.shape[-1])).sum(axis=0)
    dbias = flat.sum(axis=0)
    dx_hat = dout * gain
    mean_dx_hat = dx_hat.mean(axis=-1, keepdims=True)
    mean_dx_hat_xhat = (dx_hat * x_hat).mean(axis=-1, keepdims=True)
    dx = inv_std * (dx_hat - mean_dx_hat - x_hat * mean_dx_hat_xhat)
    return dx, dgain, dbias


def gelu_forward(x):
    inner = _GELU_C * (x + _GELU_A * x**3)
    t = np.tanh(inner)
    return 0.5 * x * (1.0 + t), (x, t)


def gelu_backward(dout, cache):
    x, t = cache
    dinner = _GELU_C * (1.0 + 3.0 * _GELU_A * x * x)
    local = 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * dinner
    return dout * local


def softmax(x, axis=-1):
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def _split_heads(x, n_heads):
    b, t, d = x.shape
    return x.reshape(b, t, n_heads, d // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x):
    b, h, t, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, t, h * dh)


def attention_forward(x, p, n_heads):
    """Full (unmasked) multi-head self-attention over the candidate sequence.

    ``p`` maps names wq, bq, wk, bk, wv, bv, wo, bo to arrays.
    """
    q, q_cache = linear_forward(x, p["wq"], p["bq"])
    k, k_cache = linear_forward(x, p["wk"], p["bk"])
    v, v_cache = linear_forward(x, p["wv"], p["bv"])
    qh = _split_heads(q, n_heads)
    kh = _split_heads(k, n_heads)
    vh = _split_heads(v, n_heads)
    scale = 1.0 / math.sqrt(qh.shape[-1])
    scores = (qh @ kh.swapaxes(-1, -2)) * scale
    attn = softmax(scores, axis=-1)
    zh = attn @ vh
    z = _merge_heads(zh)
    out, o_cache = linear_forward(z, p["wo"], p["bo"])
    cache = (q_cache, k_cache, v_cache, o_cache, qh, kh, vh, attn, scale, n_heads)
    return out, cache


def attention_backward(dout, cache):
    q_cache, k_cache, v_cache, o_cache, qh, kh, vh, attn, scale, n_heads = cache
    dz, dwo, dbo = linear_backward(dout, o_cache)
    dzh = _split_heads(dz, n_heads)
    dattn = dzh @ vh.swapaxes(-1, -2)
    dvh = attn.swapaxes(-1, -2) @ dzh
    dscores = attn * (dattn - (dattn * attn).sum(axis=-1, keepdims=True))
    dscores *= scale
    dqh = dscores @ kh
    dkh = dscores.swapaxes(-1, -2) @ qh
    dq = _merge_heads(dqh)
    dk = _merge_heads(dkh)
    dv = _merge_heads(dvh)
    dxq, dwq, dbq = linear_backward(dq, q_cache)
    dxk, dwk, dbk = linear_backward(dk, k_cache)
    dxv, dwv, dbv = linear_backward(dv, v_cache)
    dx = dxq + dxk + dxv
    grads = {
        "wq": dwq, "bq": dbq,
        "wk": dwk, "bk": dbk,
        "wv": dwv, "bv": dbv,
        "wo": dwo, "bo": dbo,
    }
    return dx, grads


def block_forward(x, p, n_heads):
    """One pre-norm block: attention then feed-forward, each with residual."""
    normed1, ln1_cache = layer_norm_forward(x, p["ln1_g"], p["ln1_b"])
    attn_out, attn_cache = attention_forward(normed1, p, n_heads)
    x1 = x + attn_out
    normed2, ln2_cache = layer_norm_forward(x1, p["ln2_g"], p["ln2_b"])
    hidden, ff1_cache = linear_forward(normed2, p["w1"], p["b1"])
    activated, gelu_cache = gelu_forward(hidden)
    ff_out, ff2_cache = linear_forward(activated, p["w2"], p["b2"])
    x2 = x1 + ff_out
    cache = (ln1_cache, attn_cache, ln2_cache, ff1_cache, gelu_cache, ff2_cache)
    return x2, cache


def block_backward(dout, cache):
    ln1_cache, attn_cache, ln2_cache, ff1_cache, gelu_cache, ff2_cache = cache
    dactivated, dw2, db2 = linear_backward(dout, ff2_cache)
    dhidden = gelu_backward(dactivated, gelu_cache)
    dnormed2, dw1, db1 = linear_backward(dhidden, ff1_cache)
    dx1_ln, dln2_g, dln2_b = layer_norm_backward(dnormed2, ln2_cache)
    dx1 = dout + dx1_ln
    dnormed1, attn_grads = attention_backward(dx1, attn_cache)
    dx_ln, dln1_g, dln1_b = layer_norm_backward(dnormed1, ln1_cache)
    dx = dx1 + dx_ln
    grads = {
        "ln1_g": dln1_g, "ln1_b": dln1_b,
        "ln2_g": dln2_g, "ln2_b": dln2_b,
        "w1": dw1, "b1": db1,
        "w2": dw2, "b2": db2,
    }
    grads.update(attn_grads)
    return dx, grads
