"""Display-only PNG export of skeleton maps.

The two channels are shown as RGB = (joints, limbs, limbs), each channel
min-max scaled to [0, 255] independently per image. Purely for eyeballing;
the scaled pixels never feed back into the numeric pipeline.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from gaitmap.framing import FramedMap
from gaitmap.render import SkeletonMap


def _scale_channel(ch: np.ndarray) -> np.ndarray:
    lo = float(ch.min())
    hi = float(ch.max())
    if hi <= lo:
        return np.zeros(ch.shape, dtype=np.uint8)
    scaled = (ch.astype(np.float64) - lo) / (hi - lo) * 255.0
    return np.rint(scaled).astype(np.uint8)


def export_png(smap: SkeletonMap | FramedMap | np.ndarray, path: str | Path) -> None:
    """Write an 8-bit RGB PNG of a (2, h, w) skeleton map."""
    data = smap if isinstance(smap, np.ndarray) else smap.data
    if data.ndim != 3 or data.shape[0] != 2:
        raise ValueError(f"expected a (2, h, w) map, got shape {data.shape}")
    j = _scale_channel(data[0])
    l = _scale_channel(data[1])
    rgb = np.stack([j, l, l], axis=-1)
    Image.fromarray(rgb, mode="RGB").save(path)
