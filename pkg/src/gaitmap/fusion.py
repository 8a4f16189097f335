"""Two-branch feature fusion (add / concat / attention) and a toy two-branch
embedding network over silhouette and skeleton-map inputs.

The toy backbone is deliberately small but exercises every fusion pathway
and shape transition:

    Conv0:  3x3 -> base channels (silhouette branch in-channels 1,
            skeleton branch in-channels 2), ReLU
    Stage1: two 3x3 convs + ReLU, base channels
    Stage2: two 3x3 convs + ReLU, base -> 2*base, first conv stride 2
    Stage3: two 3x3 convs + ReLU, 2*base, first conv stride 2
    Stage4: two 3x3 convs + ReLU, 2*base
    head:   global spatial mean -> embedding of size 2*base (32 default)

"low" fusion joins the branches after Stage1 (Stage2-4 run on the fused
stream); "high" fusion gives each branch its own Stage2 and Stage3 and
joins right before Stage4. Frames are processed independently; a sequence
is pooled with an elementwise max over per-frame embeddings.

Attention fusion scores the concatenated features with a squeeze 1x1,
a 3x3, and an expansion 1x1 conv (ReLU after the first two), then takes
a two-way softmax per (channel, pixel) over the two branch scores, so the
output is an elementwise convex combination of the branch features.

All math is float64; parameters live in a flat dict of arrays keyed
"<layer>.k" / "<layer>.b" so the gradient checker can walk them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaitmap.nn import (
    ConvLayer,
    conv2d_forward,
    conv2d_backward,
    global_mean_backward,
    global_mean_forward,
    init_conv,
    relu_backward,
    relu_forward,
)

FUSION_MODES = ("add", "concat", "attention")
FUSION_LEVELS = ("low", "high")


@dataclass(frozen=True)
class FusionConfig:
    """Where and how the two branches merge; channels is the width there."""

    mode: str = "attention"
    level: str = "low"
    channels: int = 16

    def __post_init__(self):
        if self.mode not in FUSION_MODES:
            raise ValueError(f"mode must be one of {FUSION_MODES}, got {self.mode!r}")
        if self.level not in FUSION_LEVELS:
            raise ValueError(f"level must be one of {FUSION_LEVELS}, got {self.level!r}")
        if self.channels < 1:
            raise ValueError(f"channels must be >= 1, got {self.channels}")


@dataclass(frozen=True)
class AttentionNet:
    """Score network for attention fusion: squeeze 1x1, 3x3 (padding 1), expand 1x1."""

    squeeze: ConvLayer
    mid: ConvLayer
    expand: ConvLayer


def make_attention_net(
    channels: int, ratio: int = 4, rng: np.random.Generator | None = None
) -> AttentionNet:
    """Build an AttentionNet for C-channel branches; squeeze width is C/ratio."""
    if channels % ratio != 0:
        raise ValueError(f"channels {channels} not divisible by squeeze ratio {ratio}")
    hidden = channels // ratio
    rng = rng or np.random.default_rng(0)
    return AttentionNet(
        squeeze=init_conv(rng, hidden, 2 * channels, 1),
        mid=init_conv(rng, hidden, hidden, 3, padding=1),
        expand=init_conv(rng, 2 * channels, hidden, 1),
    )


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"branch shapes differ: {a.shape} vs {b.shape}")
    if a.ndim != 3:
        raise ValueError(f"expected (C, H, W) feature maps, got {a.shape}")


# --- add -------------------------------------------------------------------

def fuse_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Element-wise sum of the two branches."""
    _check_pair(a, b)
    return a + b


# --- concat ----------------------------------------------------------------

def fuse_concat_forward(a: np.ndarray, b: np.ndarray, proj: ConvLayer):
    _check_pair(a, b)
    c = a.shape[0]
    if proj.kernel.shape[1] != 2 * c:
        raise ValueError(
            f"projection expects {proj.kernel.shape[1]} input channels, branches give {2 * c}"
        )
    cat = np.concatenate([a, b], axis=0)
    out, cache = conv2d_forward(cat, proj)
    return out, (cache, c)


def fuse_concat_backward(dout: np.ndarray, cache):
    conv_cache, c = cache
    dcat, dk, db = conv2d_backward(dout, conv_cache)
    return dcat[:c], dcat[c:], dk, db


def fuse_concat(a: np.ndarray, b: np.ndarray, proj: ConvLayer) -> np.ndarray:
    """Channel-concatenate the branches, then project back with a 1x1 conv."""
    out, _ = fuse_concat_forward(a, b, proj)
    return out


# --- attention -------------------------------------------------------------

def fuse_attention_forward(a: np.ndarray, b: np.ndarray, net: AttentionNet):
    _check_pair(a, b)
    c = a.shape[0]
    if net.squeeze.kernel.shape[1] != 2 * c or net.expand.kernel.shape[0] != 2 * c:
        raise ValueError(
            f"attention net sized for {net.squeeze.kernel.shape[1] // 2} channels, branches give {c}"
        )
    cat = np.concatenate([a, b], axis=0)
    h1, c1 = conv2d_forward(cat, net.squeeze)
    r1, m1 = relu_forward(h1)
    h2, c2 = conv2d_forward(r1, net.mid)
    r2, m2 = relu_forward(h2)
    scores, c3 = conv2d_forward(r2, net.expand)
    sa, sb = scores[:c], scores[c:]
    # two-way softmax per (channel, pixel), max-shifted for stability
    m = np.maximum(sa, sb)
    ea = np.exp(sa - m)
    eb = np.exp(sb - m)
    z = ea + eb
    wa = ea / z
    wb = eb / z
    out = wa * a + wb * b
    return out, (a, b, wa, wb, c1, m1, c2, m2, c3)


def fuse_attention_backward(dout: np.ndarray, cache):
    a, b, wa, wb, c1, m1, c2, m2, c3 = cache
    da = dout * wa
    db = dout * wb
    dsa = wa * wb * (dout * a - dout * b)
    dscores = np.concatenate([dsa, -dsa], axis=0)
    d, dk3, db3 = conv2d_backward(dscores, c3)
    d = relu_backward(d, m2)
    d, dk2, db2 = conv2d_backward(d, c2)
    d = relu_backward(d, m1)
    dcat, dk1, db1 = conv2d_backward(d, c1)
    c = a.shape[0]
    da = da + dcat[:c]
    db = db + dcat[c:]
    grads = {
        "squeeze.k": dk1,
        "squeeze.b": db1,
        "mid.k": dk2,
        "mid.b": db2,
        "expand.k": dk3,
        "expand.b": db3,
    }
    return da, db, grads


def fuse_attention(a: np.ndarray, b: np.ndarray, net: AttentionNet) -> np.ndarray:
    """Convex per-element blend of the branches, weighted by a learned score net."""
    out, _ = fuse_attention_forward(a, b, net)
    return out


def attention_weights(a: np.ndarray, b: np.ndarray, net: AttentionNet):
    """The (w_a, w_b) softmax weight maps attention fusion would apply."""
    _, cache = fuse_attention_forward(a, b, net)
    return cache[2], cache[3]


# --- toy two-branch network --------------------------------------------------


def _conv(params: dict, name: str, stride: int, padding: int) -> ConvLayer:
    return ConvLayer(
        kernel=params[name + ".k"], bias=params[name + ".b"], stride=stride, padding=padding
    )


def _conv0_forward(x, params, prefix):
    h, cc = conv2d_forward(x, _conv(params, prefix + ".conv0", 1, 1))
    r, m = relu_forward(h)
    return r, (cc, m)


def _conv0_backward(dout, cache, grads, prefix):
    cc, m = cache
    d = relu_backward(dout, m)
    d, dk, db = conv2d_backward(d, cc)
    grads[prefix + ".conv0.k"] = dk
    grads[prefix + ".conv0.b"] = db
    return d


def _stage_forward(x, params, prefix, stride):
    h1, c1 = conv2d_forward(x, _conv(params, prefix + ".a", stride, 1))
    r1, m1 = relu_forward(h1)
    h2, c2 = conv2d_forward(r1, _conv(params, prefix + ".b", 1, 1))
    r2, m2 = relu_forward(h2)
    return r2, (c1, m1, c2, m2)


def _stage_backward(dout, cache, grads, prefix):
    c1, m1, c2, m2 = cache
    d = relu_backward(dout, m2)
    d, dk, db = conv2d_backward(d, c2)
    grads[prefix + ".b.k"] = dk
    grads[prefix + ".b.b"] = db
    d = relu_backward(d, m1)
    d, dk, db = conv2d_backward(d, c1)
    grads[prefix + ".a.k"] = dk
    grads[prefix + ".a.b"] = db
    return d


def _fuse_forward(a, b, config: FusionConfig, params):
    if config.mode == "add":
        return fuse_add(a, b), None
    if config.mode == "concat":
        return fuse_concat_forward(a, b, _conv(params, "fuse.proj", 1, 0))
    net = AttentionNet(
        squeeze=_conv(params, "fuse.squeeze", 1, 0),
        mid=_conv(params, "fuse.mid", 1, 1),
        expand=_conv(params, "fuse.expand", 1, 0),
    )
    return fuse_attention_forward(a, b, net)


def _fuse_backward(dout, cache, config: FusionConfig, grads):
    if config.mode == "add":
        return dout, dout
    if config.mode == "concat":
        da, db, dk, dbias = fuse_concat_backward(dout, cache)
        grads["fuse.proj.k"] = dk
        grads["fuse.proj.b"] = dbias
        return da, db
    da, db, fgrads = fuse_attention_backward(dout, cache)
    for key, val in fgrads.items():
        grads["fuse." + key] = val
    return da, db


def init_two_branch_params(
    config: FusionConfig,
    base_channels: int = 16,
    squeeze_ratio: int = 4,
    seed: int = 0,
) -> dict[str, np.ndarray]:
    """Seeded uniform [-0.1, 0.1] parameter dict for two_branch_forward.

    config.channels must equal base_channels for low-level fusion and
    2*base_channels for high-level fusion.
    """
    want = base_channels if config.level == "low" else 2 * base_channels
    if config.channels != want:
        raise ValueError(
            f"{config.level}-level fusion with base {base_channels} needs channels={want}, "
            f"got {config.channels}"
        )
    rng = np.random.default_rng(seed)
    b1, b2 = base_channels, 2 * base_channels
    params: dict[str, np.ndarray] = {}

    def add(name: str, layer: ConvLayer):
        params[name + ".k"] = layer.kernel
        params[name + ".b"] = layer.bias

    add("sil.conv0", init_conv(rng, b1, 1, 3, padding=1))
    add("skel.conv0", init_conv(rng, b1, 2, 3, padding=1))
    for branch in ("sil", "skel"):
        add(f"{branch}.stage1.a", init_conv(rng, b1, b1, 3, padding=1))
        add(f"{branch}.stage1.b", init_conv(rng, b1, b1, 3, padding=1))
    if config.level == "high":
        for branch in ("sil", "skel"):
            add(f"{branch}.stage2.a", init_conv(rng, b2, b1, 3, stride=2, padding=1))
            add(f"{branch}.stage2.b", init_conv(rng, b2, b2, 3, padding=1))
            add(f"{branch}.stage3.a", init_conv(rng, b2, b2, 3, stride=2, padding=1))
            add(f"{branch}.stage3.b", init_conv(rng, b2, b2, 3, padding=1))
    c = config.channels
    if config.mode == "concat":
        add("fuse.proj", init_conv(rng, c, 2 * c, 1))
    elif config.mode == "attention":
        if c % squeeze_ratio != 0:
            raise ValueError(f"channels {c} not divisible by squeeze ratio {squeeze_ratio}")
        hidden = c // squeeze_ratio
        add("fuse.squeeze", init_conv(rng, hidden, 2 * c, 1))
        add("fuse.mid", init_conv(rng, hidden, hidden, 3, padding=1))
        add("fuse.expand", init_conv(rng, 2 * c, hidden, 1))
    if config.level == "low":
        add("main.stage2.a", init_conv(rng, b2, b1, 3, stride=2, padding=1))
        add("main.stage2.b", init_conv(rng, b2, b2, 3, padding=1))
        add("main.stage3.a", init_conv(rng, b2, b2, 3, stride=2, padding=1))
        add("main.stage3.b", init_conv(rng, b2, b2, 3, padding=1))
    add("main.stage4.a", init_conv(rng, b2, b2, 3, padding=1))
    add("main.stage4.b", init_conv(rng, b2, b2, 3, padding=1))
    return params


def two_branch_forward_cached(sil, skel, config: FusionConfig, params):
    if sil.ndim != 3 or sil.shape[0] != 1:
        raise ValueError(f"silhouette input must be (1, H, W), got {sil.shape}")
    if skel.ndim != 3 or skel.shape[0] != 2:
        raise ValueError(f"skeleton input must be (2, H, W), got {skel.shape}")
    if sil.shape[1:] != skel.shape[1:]:
        raise ValueError(f"spatial dims differ: {sil.shape} vs {skel.shape}")
    caches = {}
    a, caches["sil.conv0"] = _conv0_forward(sil, params, "sil")
    b, caches["skel.conv0"] = _conv0_forward(skel, params, "skel")
    a, caches["sil.stage1"] = _stage_forward(a, params, "sil.stage1", 1)
    b, caches["skel.stage1"] = _stage_forward(b, params, "skel.stage1", 1)
    if config.level == "high":
        a, caches["sil.stage2"] = _stage_forward(a, params, "sil.stage2", 2)
        a, caches["sil.stage3"] = _stage_forward(a, params, "sil.stage3", 2)
        b, caches["skel.stage2"] = _stage_forward(b, params, "skel.stage2", 2)
        b, caches["skel.stage3"] = _stage_forward(b, params, "skel.stage3", 2)
    x, caches["fuse"] = _fuse_forward(a, b, config, params)
    if config.level == "low":
        x, caches["main.stage2"] = _stage_forward(x, params, "main.stage2", 2)
        x, caches["main.stage3"] = _stage_forward(x, params, "main.stage3", 2)
    x, caches["main.stage4"] = _stage_forward(x, params, "main.stage4", 1)
    emb, caches["head"] = global_mean_forward(x)
    return emb, caches


def two_branch_forward(sil, skel, config: FusionConfig, params) -> np.ndarray:
    """Embed one (silhouette, skeleton-map) frame pair; returns (2*base,) float64."""
    emb, _ = two_branch_forward_cached(sil, skel, config, params)
    return emb


def two_branch_backward(demb, caches, config: FusionConfig, params):
    """Gradients of <demb, embedding> w.r.t. every parameter array."""
    grads: dict[str, np.ndarray] = {}
    d = global_mean_backward(demb, caches["head"])
    d = _stage_backward(d, caches["main.stage4"], grads, "main.stage4")
    if config.level == "low":
        d = _stage_backward(d, caches["main.stage3"], grads, "main.stage3")
        d = _stage_backward(d, caches["main.stage2"], grads, "main.stage2")
    da, db = _fuse_backward(d, caches["fuse"], config, grads)
    if config.level == "high":
        db = _stage_backward(db, caches["skel.stage3"], grads, "skel.stage3")
        db = _stage_backward(db, caches["skel.stage2"], grads, "skel.stage2")
        da = _stage_backward(da, caches["sil.stage3"], grads, "sil.stage3")
        da = _stage_backward(da, caches["sil.stage2"], grads, "sil.stage2")
    db = _stage_backward(db, caches["skel.stage1"], grads, "skel.stage1")
    da = _stage_backward(da, caches["sil.stage1"], grads, "sil.stage1")
    _conv0_backward(db, caches["skel.conv0"], grads, "skel")
    _conv0_backward(da, caches["sil.conv0"], grads, "sil")
    return grads


def pool_sequence(embeddings: np.ndarray) -> np.ndarray:
    """Set-style pooling of (T, D) per-frame embeddings: elementwise max over T."""
    if embeddings.ndim != 2 or embeddings.shape[0] < 1:
        raise ValueError(f"expected (T, D) embeddings, got {embeddings.shape}")
    return embeddings.max(axis=0)
