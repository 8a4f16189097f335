"""Deterministic synthetic walking poses in COCO-17 layout.

Produces image-space keypoints of a stick figure walking across the frame
with sinusoidal limb swing. Good enough to exercise the full pipeline and
to eyeball PNG exports; makes no claim of biomechanical realism.
"""

from __future__ import annotations

import math

import numpy as np

from gaitmap.pose import Keypoint, PoseFrame, PoseSequence, coco17_topology

# y offsets from the head top, as fractions of body height
_BODY_Y = {
    "nose": 0.10,
    "eye": 0.08,
    "ear": 0.09,
    "shoulder": 0.22,
    "elbow": 0.35,
    "wrist": 0.48,
    "hip": 0.53,
    "knee": 0.75,
    "ankle": 0.96,
}


def walking_keypoints(
    t: float, origin_x: float, origin_y: float, height: float, phase: float
) -> np.ndarray:
    """(17, 3) keypoints of one walking pose at cycle phase ``phase``."""
    h = height
    head_top = origin_y - h
    swing = math.sin(phase)
    counter = math.sin(phase + math.pi)

    def y(part):
        return head_top + _BODY_Y[part] * h

    shoulder_dx = 0.11 * h
    hip_dx = 0.08 * h
    arm_amp = 0.10 * h
    leg_amp = 0.12 * h

    pts = np.zeros((17, 3))
    pts[0] = (origin_x, y("nose"), 0.9)
    pts[1] = (origin_x - 0.03 * h, y("eye"), 0.9)
    pts[2] = (origin_x + 0.03 * h, y("eye"), 0.9)
    pts[3] = (origin_x - 0.05 * h, y("ear"), 0.85)
    pts[4] = (origin_x + 0.05 * h, y("ear"), 0.85)
    pts[5] = (origin_x - shoulder_dx, y("shoulder"), 0.95)
    pts[6] = (origin_x + shoulder_dx, y("shoulder"), 0.95)
    pts[7] = (origin_x - shoulder_dx + 0.5 * arm_amp * counter, y("elbow"), 0.9)
    pts[8] = (origin_x + shoulder_dx + 0.5 * arm_amp * swing, y("elbow"), 0.9)
    pts[9] = (origin_x - shoulder_dx + arm_amp * counter, y("wrist"), 0.85)
    pts[10] = (origin_x + shoulder_dx + arm_amp * swing, y("wrist"), 0.85)
    pts[11] = (origin_x - hip_dx, y("hip"), 0.95)
    pts[12] = (origin_x + hip_dx, y("hip"), 0.95)
    pts[13] = (origin_x - hip_dx + 0.6 * leg_amp * swing, y("knee"), 0.9)
    pts[14] = (origin_x + hip_dx + 0.6 * leg_amp * counter, y("knee"), 0.9)
    pts[15] = (origin_x - hip_dx + leg_amp * swing, y("ankle"), 0.85)
    pts[16] = (origin_x + hip_dx + leg_amp * counter, y("ankle"), 0.85)
    return pts


def make_walking_sequence(
    n_frames: int,
    seed: int = 0,
    subject_id: str = "synthetic",
    sequence_id: str = "walk",
    height: float = 180.0,
    speed: float = 3.0,
    noise: float = 0.5,
) -> PoseSequence:
    """A seeded walking sequence starting near the left of a 640x480 scene."""
    rng = np.random.default_rng(seed)
    start_x = float(rng.uniform(80, 160))
    ground_y = float(rng.uniform(380, 440))
    stride_rate = float(rng.uniform(0.25, 0.4))
    frames = []
    for i in range(n_frames):
        pts = walking_keypoints(
            i, start_x + speed * i, ground_y, height, 2 * math.pi * stride_rate * i
        )
        if noise > 0:
            pts[:, :2] += rng.normal(0.0, noise, size=(17, 2))
            pts[:, 2] = np.clip(pts[:, 2] + rng.normal(0, 0.02, 17), 0.05, 1.0)
        joints = tuple(Keypoint(float(x), float(y), float(c)) for x, y, c in pts)
        frames.append(PoseFrame(joints=joints, frame_index=i))
    return PoseSequence(
        frames=tuple(frames),
        subject_id=subject_id,
        sequence_id=sequence_id,
        topology=coco17_topology(),
    )
