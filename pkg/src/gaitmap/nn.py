"""Minimal numpy layer toolkit: conv2d and relu with analytic backward passes.

Everything computes in float64 so finite-difference gradient checks stay
sharp. Tensors are plain numpy arrays; a single (C, H, W) image per call
(no batch axis). Forward functions return (output, cache); the matching
backward takes the upstream gradient and the cache.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


@dataclass(frozen=True)
class ConvLayer:
    """Cross-correlation weights: kernel (C_out, C_in, kh, kw), bias (C_out,)."""

    kernel: np.ndarray
    bias: np.ndarray
    stride: int = 1
    padding: int = 0

    def __post_init__(self):
        if self.kernel.ndim != 4:
            raise ValueError(f"kernel must be 4-d, got shape {self.kernel.shape}")
        _, _, kh, kw = self.kernel.shape
        if kh % 2 == 0 or kw % 2 == 0:
            raise ValueError(f"kernel spatial dims must be odd, got {kh}x{kw}")
        if self.bias.shape != (self.kernel.shape[0],):
            raise ValueError(
                f"bias shape {self.bias.shape} does not match {self.kernel.shape[0]} filters"
            )
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.padding < 0:
            raise ValueError(f"padding must be >= 0, got {self.padding}")


def conv2d_forward(x: np.ndarray, layer: ConvLayer):
    """Standard zero-padded cross-correlation of a (C_in, H, W) input."""
    co, ci, kh, kw = layer.kernel.shape
    if x.ndim != 3 or x.shape[0] != ci:
        raise ValueError(f"input shape {x.shape} incompatible with kernel {layer.kernel.shape}")
    s, p = layer.stride, layer.padding
    xp = np.pad(x, ((0, 0), (p, p), (p, p))) if p else x
    if xp.shape[1] < kh or xp.shape[2] < kw:
        raise ValueError(f"input {x.shape} smaller than kernel {kh}x{kw} after padding {p}")
    win = sliding_window_view(xp, (kh, kw), axis=(1, 2))[:, ::s, ::s]
    out = np.tensordot(layer.kernel, win, axes=([1, 2, 3], [0, 3, 4]))
    out += layer.bias[:, None, None]
    cache = (x.shape, xp.shape, win, layer)
    return out, cache


def conv2d_backward(dout: np.ndarray, cache):
    """Gradients w.r.t. input, kernel, and bias."""
    x_shape, xp_shape, win, layer = cache
    co, ci, kh, kw = layer.kernel.shape
    s, p = layer.stride, layer.padding
    ho, wo = dout.shape[1], dout.shape[2]
    db = dout.sum(axis=(1, 2))
    dk = np.tensordot(dout, win, axes=([1, 2], [1, 2]))
    dxp = np.zeros(xp_shape, dtype=np.float64)
    for u in range(kh):
        for v in range(kw):
            contrib = np.tensordot(layer.kernel[:, :, u, v], dout, axes=([0], [0]))
            dxp[:, u : u + s * ho : s, v : v + s * wo : s] += contrib
    dx = dxp[:, p : p + x_shape[1], p : p + x_shape[2]] if p else dxp
    return dx, dk, db


def conv2d(x: np.ndarray, layer: ConvLayer) -> np.ndarray:
    """Forward-only convenience wrapper."""
    out, _ = conv2d_forward(x, layer)
    return out


def relu_forward(x: np.ndarray):
    mask = x > 0
    return x * mask, mask


def relu_backward(dout: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return dout * mask


def global_mean_forward(x: np.ndarray):
    """Spatial average of a (C, H, W) map -> (C,) embedding."""
    return x.mean(axis=(1, 2)), x.shape


def global_mean_backward(dout: np.ndarray, shape) -> np.ndarray:
    c, h, w = shape
    return np.broadcast_to(dout[:, None, None] / (h * w), shape).copy()


def triplet_loss(
    anchor: np.ndarray, positive: np.ndarray, negative: np.ndarray, margin: float = 0.2
) -> float:
    """Hinge on the embedding distance gap: max(0, d(a,p) - d(a,n) + margin)."""
    if anchor.shape != positive.shape or anchor.shape != negative.shape:
        raise ValueError(
            f"embedding shapes differ: {anchor.shape}, {positive.shape}, {negative.shape}"
        )
    d_pos = float(np.linalg.norm(anchor - positive))
    d_neg = float(np.linalg.norm(anchor - negative))
    return max(0.0, d_pos - d_neg + margin)


def init_conv(
    rng: np.random.Generator,
    out_ch: int,
    in_ch: int,
    k: int,
    stride: int = 1,
    padding: int = 0,
) -> ConvLayer:
    """Seeded uniform [-0.1, 0.1] initialization, reproducible for tests."""
    kernel = rng.uniform(-0.1, 0.1, size=(out_ch, in_ch, k, k))
    bias = rng.uniform(-0.1, 0.1, size=(out_ch,))
    return ConvLayer(kernel=kernel, bias=bias, stride=stride, padding=padding)
