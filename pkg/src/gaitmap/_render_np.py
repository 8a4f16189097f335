"""Pure-numpy render kernel (fallback when the compiled extension is absent).

Bit-identical twin of _render_cy.pyx: same bounding-box rule, same
accumulation order (primitive index order into a float64 canvas, cast to
float32 at the end), same deterministic exp, and expressions arranged so
every per-element IEEE-754 operation sequence matches the C loop.
"""

from __future__ import annotations

import math

import numpy as np

from gaitmap._detexp import detexp

BACKEND_NAME = "numpy"


def _lo(v: float, n: int) -> int:
    """Smallest pixel index >= v, clamped to [0, n]. Infinity-safe."""
    if v <= 0.0:
        return 0
    if v >= n:
        return n
    return int(math.ceil(v))


def _hi(v: float, n: int) -> int:
    """One past the largest pixel index <= v, clamped to [0, n]. Infinity-safe."""
    if v >= n - 1:
        return n
    if v < 0.0:
        return 0
    return int(math.floor(v)) + 1


def render_joint_channel(pts: np.ndarray, R: int, sigma: float, radius: float) -> np.ndarray:
    """Confidence-weighted Gaussian splat of each point, summed into one (R, R) float32 map.

    pts is (K, 3) float64 rows (x, y, c); x indexes columns, y indexes rows.
    Gaussians are evaluated at integer pixel coordinates and truncated at
    radius*sigma from the center.
    """
    canvas = np.zeros((R, R), dtype=np.float64)
    neg_inv = -1.0 / (2.0 * sigma * sigma)
    r = radius * sigma
    cols = np.arange(R, dtype=np.float64)
    rows = np.arange(R, dtype=np.float64)[:, None]
    for k in range(pts.shape[0]):
        x = float(pts[k, 0])
        y = float(pts[k, 1])
        c = float(pts[k, 2])
        if c == 0.0:
            continue
        x0, x1 = _lo(x - r, R), _hi(x + r, R)
        y0, y1 = _lo(y - r, R), _hi(y + r, R)
        if x0 >= x1 or y0 >= y1:
            continue
        dx = cols[x0:x1] - x
        dy = rows[y0:y1] - y
        d2 = dx * dx + dy * dy
        canvas[y0:y1, x0:x1] += detexp(d2 * neg_inv) * c
    return canvas.astype(np.float32)


def render_limb_channel(
    pts: np.ndarray, limbs: np.ndarray, R: int, sigma: float, radius: float
) -> np.ndarray:
    """Gaussian of point-to-segment distance per limb, summed into one (R, R) float32 map.

    Each limb is the segment between two joint indices; its weight is the
    smaller endpoint confidence. The projection parameter is clamped to
    [0, 1], so beyond the endpoints the distance is to the nearer endpoint.
    """
    canvas = np.zeros((R, R), dtype=np.float64)
    neg_inv = -1.0 / (2.0 * sigma * sigma)
    r = radius * sigma
    cols = np.arange(R, dtype=np.float64)
    rows = np.arange(R, dtype=np.float64)[:, None]
    for n in range(limbs.shape[0]):
        a = int(limbs[n, 0])
        b = int(limbs[n, 1])
        x1, y1, c1 = float(pts[a, 0]), float(pts[a, 1]), float(pts[a, 2])
        x2, y2, c2 = float(pts[b, 0]), float(pts[b, 1]), float(pts[b, 2])
        w = c1 if c1 < c2 else c2
        if w == 0.0:
            continue
        lx = x1 if x1 < x2 else x2
        hx = x1 if x1 > x2 else x2
        ly = y1 if y1 < y2 else y2
        hy = y1 if y1 > y2 else y2
        x0, xe = _lo(lx - r, R), _hi(hx + r, R)
        y0, ye = _lo(ly - r, R), _hi(hy + r, R)
        if x0 >= xe or y0 >= ye:
            continue
        wx = cols[x0:xe] - x1
        wy = rows[y0:ye] - y1
        vx = x2 - x1
        vy = y2 - y1
        vv = vx * vx + vy * vy
        if vv > 0.0:
            t = (wx * vx + wy * vy) / vv
            t = np.clip(t, 0.0, 1.0)
            dx = wx - t * vx
            dy = wy - t * vy
        else:
            dx = wx + np.zeros_like(wy)  # degenerate limb: distance to the point
            dy = wy + np.zeros_like(wx)
        d2 = dx * dx + dy * dy
        canvas[y0:ye, x0:xe] += detexp(d2 * neg_inv) * w
    return canvas.astype(np.float32)
