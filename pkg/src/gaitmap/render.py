"""Render a normalized frame into the 2-channel skeleton map.

Channel 0 sums one confidence-weighted Gaussian per joint; channel 1 sums
one Gaussian of point-to-segment distance per limb, weighted by the smaller
endpoint confidence. Gaussians are evaluated at integer pixel coordinates
(not pixel centers), with x indexing the horizontal axis and y the vertical
axis (stored row-major as data[channel, y, x]). Summed values are not
clamped; PNG export rescales for display instead.

The production path culls each Gaussian beyond truncation_radius * sigma
and runs on a compiled kernel when available (pure-numpy fallback
otherwise; both produce bit-identical output, see _detexp.py). The
brute-force path evaluates every primitive at every pixel with numpy's
exp in float64 and no truncation; it is the reference the fast path is
tested against (agreement within 1e-6 per pixel).

Set GAITMAP_BACKEND=cython|numpy to force a backend at import time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from gaitmap.normalize import NormalizedFrame
from gaitmap.pose import Topology

from gaitmap import _render_np


def _load_backend():
    choice = os.environ.get("GAITMAP_BACKEND", "auto")
    if choice not in ("auto", "cython", "numpy"):
        raise ValueError(f"GAITMAP_BACKEND must be auto, cython or numpy, got {choice!r}")
    if choice in ("auto", "cython"):
        try:
            from gaitmap import _render_cy

            return _render_cy
        except ImportError:
            if choice == "cython":
                raise
    return _render_np


_KERNEL = _load_backend()


def active_backend() -> str:
    """Name of the render kernel selected at import ("cython" or "numpy")."""
    return _KERNEL.BACKEND_NAME


@dataclass(frozen=True)
class RenderOptions:
    """Gaussian spread (pixels) and the fast path's cull radius (in sigmas).

    truncation_radius >= 6 keeps the fast path within 1e-6 of the
    untruncated reference for up to ~60 unit-confidence primitives
    (each culled tail contributes at most exp(-r^2/2) ~ 1.5e-8).
    """

    sigma: float = 8.0
    truncation_radius: float = 6.0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.truncation_radius >= 3.0:
            raise ValueError(
                f"truncation_radius must be >= 3 sigma, got {self.truncation_radius}"
            )


@dataclass(frozen=True)
class SkeletonMap:
    """Non-negative float32 image of shape (2, height, width): joints, limbs."""

    data: np.ndarray
    sigma: float


def _pts(frame: NormalizedFrame) -> np.ndarray:
    return np.ascontiguousarray(frame.joints, dtype=np.float64)


def _limb_array(topology: Topology) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(topology.limbs, dtype=np.intc))


def render_joint_map(frame: NormalizedFrame, opts: RenderOptions) -> np.ndarray:
    """Joint channel only, shape (R, R) float32."""
    return _KERNEL.render_joint_channel(
        _pts(frame), frame.R, opts.sigma, opts.truncation_radius
    )


def render_limb_map(
    frame: NormalizedFrame, topology: Topology, opts: RenderOptions
) -> np.ndarray:
    """Limb channel only, shape (R, R) float32."""
    _check_frame(frame, topology)
    return _KERNEL.render_limb_channel(
        _pts(frame), _limb_array(topology), frame.R, opts.sigma, opts.truncation_radius
    )


def render_skeleton_map(
    frame: NormalizedFrame, topology: Topology, opts: RenderOptions
) -> SkeletonMap:
    """Both channels stacked: data[0] = joints, data[1] = limbs."""
    _check_frame(frame, topology)
    pts = _pts(frame)
    joint = _KERNEL.render_joint_channel(pts, frame.R, opts.sigma, opts.truncation_radius)
    limb = _KERNEL.render_limb_channel(
        pts, _limb_array(topology), frame.R, opts.sigma, opts.truncation_radius
    )
    return SkeletonMap(data=np.stack([joint, limb]), sigma=opts.sigma)


def render_skeleton_map_bruteforce(
    frame: NormalizedFrame, topology: Topology, opts: RenderOptions
) -> SkeletonMap:
    """Reference renderer: every primitive at every pixel, float64, no culling.

    Independent of the fast kernels (numpy exp, no bounding boxes); rounds
    to float32 at the end. Used as the test oracle.
    """
    _check_frame(frame, topology)
    R = frame.R
    sigma = opts.sigma
    pts = np.asarray(frame.joints, dtype=np.float64)
    cols = np.arange(R, dtype=np.float64)[None, :]
    rows = np.arange(R, dtype=np.float64)[:, None]
    joint = np.zeros((R, R), dtype=np.float64)
    for x, y, c in pts:
        joint += np.exp(-((cols - x) ** 2 + (rows - y) ** 2) / (2.0 * sigma**2)) * c
    limb = np.zeros((R, R), dtype=np.float64)
    for a, b in topology.limbs:
        x1, y1, c1 = pts[a]
        x2, y2, c2 = pts[b]
        w = min(c1, c2)
        px = cols - x1
        py = rows - y1
        vx = x2 - x1
        vy = y2 - y1
        vv = vx * vx + vy * vy
        if vv == 0.0:
            d2 = px**2 + py**2
        else:
            t = np.clip((px * vx + py * vy) / vv, 0.0, 1.0)
            d2 = (px - t * vx) ** 2 + (py - t * vy) ** 2
        limb += np.exp(-d2 / (2.0 * sigma**2)) * w
    data = np.stack([joint, limb]).astype(np.float32)
    return SkeletonMap(data=data, sigma=sigma)


def _check_frame(frame: NormalizedFrame, topology: Topology) -> None:
    if frame.joints.shape[0] != topology.K:
        raise ValueError(
            f"frame has {frame.joints.shape[0]} joints, topology expects {topology.K}"
        )
