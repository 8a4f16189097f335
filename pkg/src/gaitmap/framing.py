"""Subject-centered cropping, bilinear resize, and double-side cutting.

Turns a rendered (2, R, R) skeleton map into the model input resolution,
(2, 64, 44) by default: crop the vertical range of above-threshold pixels
plus the fixed central horizontal window of width H, resize the crop to a
square, then cut equal column blocks off both sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaitmap.errors import ConfigError, EmptyMapError
from gaitmap.render import SkeletonMap

# Gaussian tails never reach exact zero, so "non-zero pixels" needs a
# threshold: well below any visually meaningful intensity, above f32 noise.
CROP_EPSILON = 1e-4


@dataclass(frozen=True)
class FramedMap:
    """Final model-input map plus the canvas rectangle it was cropped from.

    source_crop is (row_start, row_stop, col_start, col_stop) in canvas
    pixel coordinates, half-open.
    """

    data: np.ndarray
    source_crop: tuple[int, int, int, int]


def subject_centered_crop(
    smap: SkeletonMap, H: int, epsilon: float = CROP_EPSILON
) -> SkeletonMap:
    """Trim blank canvas: rows with any value > epsilon, central H columns.

    The vertical range is computed jointly over both channels so they stay
    spatially registered. Raises EmptyMapError if nothing exceeds epsilon.
    """
    r0, r1, c0, c1 = crop_window(smap, H, epsilon)
    return SkeletonMap(data=smap.data[:, r0:r1, c0:c1], sigma=smap.sigma)


def crop_window(
    smap: SkeletonMap, H: int, epsilon: float = CROP_EPSILON
) -> tuple[int, int, int, int]:
    """The (row_start, row_stop, col_start, col_stop) subject_centered_crop uses."""
    data = smap.data
    R = data.shape[2]
    row_peak = data.max(axis=0).max(axis=1)  # max over channels, then over columns
    alive = np.flatnonzero(row_peak > epsilon)
    if alive.size == 0:
        raise EmptyMapError(f"no pixel above {epsilon}, cannot crop")
    c0 = (R - H) // 2
    return int(alive[0]), int(alive[-1]) + 1, c0, c0 + H


def resize_bilinear(data: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Per-channel bilinear resize of a (C, h, w) array, corner-aligned.

    Output pixel (r, c) samples the source at
        (r * (h-1) / (out_h-1),  c * (w-1) / (out_w-1))
    (0 when the output axis has a single pixel) and interpolates the four
    neighbors as nested lerps:
        top = v00 + wc*(v01-v00); bot = v10 + wc*(v11-v10)
        out = top + wr*(bot-top)
    computed in float64 and clamped to the per-channel input range so
    rounding can never overshoot the input min/max. Returns float32.
    """
    if out_h < 1 or out_w < 1:
        raise ConfigError(f"output size must be positive, got {out_h}x{out_w}")
    c, h, w = data.shape
    src = data.astype(np.float64)
    src_r = np.arange(out_h, dtype=np.float64) * ((h - 1) / (out_h - 1)) if out_h > 1 \
        else np.zeros(out_h)
    src_c = np.arange(out_w, dtype=np.float64) * ((w - 1) / (out_w - 1)) if out_w > 1 \
        else np.zeros(out_w)
    r0 = np.floor(src_r).astype(np.intp)
    c0 = np.floor(src_c).astype(np.intp)
    r0 = np.minimum(r0, h - 1)
    c0 = np.minimum(c0, w - 1)
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    wr = (src_r - r0)[None, :, None]
    wc = (src_c - c0)[None, None, :]

    v00 = src[:, r0[:, None], c0[None, :]]
    v01 = src[:, r0[:, None], c1[None, :]]
    v10 = src[:, r1[:, None], c0[None, :]]
    v11 = src[:, r1[:, None], c1[None, :]]
    top = v00 + wc * (v01 - v00)
    bot = v10 + wc * (v11 - v10)
    out = top + wr * (bot - top)

    lo = src.min(axis=(1, 2))[:, None, None]
    hi = src.max(axis=(1, 2))[:, None, None]
    return np.clip(out, lo, hi).astype(np.float32)


def double_side_cut(data: np.ndarray, out_w: int = 44) -> np.ndarray:
    """Remove an equal block of columns from each side: width 64 -> 44 keeps [10, 54)."""
    w = data.shape[2]
    if w <= out_w or (w - out_w) % 2 != 0:
        raise ValueError(
            f"cannot cut width {w} to {out_w}: need an even positive column surplus"
        )
    cut = (w - out_w) // 2
    return data[:, :, cut : cut + out_w]


def frame_map(
    smap: SkeletonMap,
    H: int,
    out_h: int = 64,
    out_w: int = 44,
    epsilon: float = CROP_EPSILON,
) -> FramedMap:
    """crop -> resize to (out_h, out_h) -> double-side cut to out_w."""
    window = crop_window(smap, H, epsilon)
    r0, r1, c0, c1 = window
    cropped = smap.data[:, r0:r1, c0:c1]
    resized = resize_bilinear(cropped, out_h, out_h)
    return FramedMap(data=double_side_cut(resized, out_w), source_crop=window)
