"""Center/scale normalization of pose frames onto the render canvas.

The transform anchors the body barycenter (midpoint of the two hips) at
(R/2, R/2) and scales the joint y-extent to the body height H:

    s    = H / (y_max - y_min)          over joints with c > 0
    out  = ((x - x_core) * s + R/2,  (y - y_core) * s + R/2,  c)

This removes walking-trajectory and camera-distance information: the output
is invariant under any translation and any positive scaling of the input.

``literal_eq1=True`` selects a compatibility mode that instead applies four
sequential assignments (center shift of both axes, then a y-extent rescale
of both axes computed on the shifted values). That reading moves the
barycenter off (R/2, R/2) and shifts the body out of the fixed central
crop window, so it is kept for comparison only; the invariants documented
on NormalizedFrame hold only for the default transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaitmap.errors import ConfigError, DegenerateFrameError
from gaitmap.pose import PoseFrame, Topology


@dataclass(frozen=True)
class NormalizedFrame:
    """Joints in canvas coordinates: (K, 3) float64 rows of (x, y, c).

    For the default transform, the hip midpoint sits at (R/2, R/2) and the
    y-extent of positive-confidence joints equals H (both to ~1e-9).
    Confidence values pass through normalization unchanged.
    """

    joints: np.ndarray
    R: int
    H: int


def normalize_frame(
    frame: PoseFrame,
    topology: Topology,
    H: int,
    R: int,
    literal_eq1: bool = False,
) -> NormalizedFrame:
    """Map a raw pose frame onto the R x R canvas with body height H.

    Raises ConfigError if R < H, and DegenerateFrameError when the frame has
    no positive-confidence joint or a zero vertical extent (the caller
    decides whether to skip or abort).
    """
    if R < H:
        raise ConfigError(f"canvas size R={R} must be at least the body height H={H}")
    if len(frame.joints) != topology.K:
        raise ValueError(
            f"frame has {len(frame.joints)} joints, topology expects {topology.K}"
        )
    pts = np.array([[kp.x, kp.y, kp.c] for kp in frame.joints], dtype=np.float64)
    conf = pts[:, 2]
    if not np.any(conf > 0.0):
        raise DegenerateFrameError(
            f"frame {frame.frame_index}: no joint with positive confidence"
        )

    x = pts[:, 0]
    y = pts[:, 1]
    x_core = (x[topology.hip_left] + x[topology.hip_right]) / 2.0
    y_core = (y[topology.hip_left] + y[topology.hip_right]) / 2.0

    if literal_eq1:
        # Sequential reading: shift first, then rescale both axes by the
        # y-extent of the shifted coordinates.
        xs = x - x_core + R / 2.0
        ys = y - y_core + R / 2.0
        y_min = ys[conf > 0.0].min()
        y_max = ys[conf > 0.0].max()
        extent = y_max - y_min
        _check_extent(extent, H, frame.frame_index)
        out_x = (xs - y_min) / extent * H
        out_y = (ys - y_min) / extent * H
    else:
        y_min = y[conf > 0.0].min()
        y_max = y[conf > 0.0].max()
        extent = y_max - y_min
        _check_extent(extent, H, frame.frame_index)
        s = H / extent
        out_x = (x - x_core) * s + R / 2.0
        out_y = (y - y_core) * s + R / 2.0

    out = np.column_stack([out_x, out_y, conf])
    return NormalizedFrame(joints=out, R=R, H=H)


def _check_extent(extent: float, H: int, frame_index: int) -> None:
    # H/extent must also be finite: a denormal-tiny extent would overflow
    # the scale and poison coordinates downstream.
    if not (extent > 0.0) or not np.isfinite(H / extent):
        raise DegenerateFrameError(
            f"frame {frame_index}: zero vertical extent, cannot scale-normalize"
        )
