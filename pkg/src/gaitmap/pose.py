"""Domain types for 2D pose data and the JSON-lines pose file format.

A pose file holds one frame per line:

    {"frame": <int >= 0>, "kps": [[x, y, c], ... K triplets]}

Coordinates are image pixels, c is a confidence in [0, 1]. Frame indices
must be strictly increasing. Confidences outside [0, 1] are clamped (real
pose estimators occasionally emit 1.0 + eps); the clamp count is kept on
the parsed sequence. All types are immutable after construction and safe
to share between threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from gaitmap.errors import PoseParseError, PoseSchemaError, PoseValidationError

COCO17_JOINT_NAMES = (
    "nose",            # 0
    "left_eye",        # 1
    "right_eye",       # 2
    "left_ear",        # 3
    "right_ear",       # 4
    "left_shoulder",   # 5
    "right_shoulder",  # 6
    "left_elbow",      # 7
    "right_elbow",     # 8
    "left_wrist",      # 9
    "right_wrist",     # 10
    "left_hip",        # 11
    "right_hip",       # 12
    "left_knee",       # 13
    "right_knee",      # 14
    "left_ankle",      # 15
    "right_ankle",     # 16
)

# The standard 19-edge COCO skeleton (pycocotools convention), zero-based,
# each pair sorted ascending. See docs/formats.md.
COCO17_LIMBS = (
    (0, 1),
    (0, 2),
    (1, 2),
    (1, 3),
    (2, 4),
    (3, 5),
    (4, 6),
    (5, 6),
    (5, 7),
    (5, 11),
    (6, 8),
    (6, 12),
    (7, 9),
    (8, 10),
    (11, 12),
    (11, 13),
    (12, 14),
    (13, 15),
    (14, 16),
)


@dataclass(frozen=True)
class Keypoint:
    """One joint detection: pixel coordinates plus confidence in [0, 1]."""

    x: float
    y: float
    c: float


@dataclass(frozen=True)
class Topology:
    """Joint count, limb edge list, and which joints are the hips.

    Limb endpoints are joint indices; the hip pair defines the body
    barycenter used by normalization.
    """

    K: int
    limbs: tuple[tuple[int, int], ...]
    hip_left: int
    hip_right: int

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"topology needs at least 2 joints, got K={self.K}")
        if len(self.limbs) < 1:
            raise ValueError("topology needs at least one limb")
        for a, b in self.limbs:
            if not (0 <= a < self.K and 0 <= b < self.K):
                raise ValueError(f"limb ({a}, {b}) out of range for K={self.K}")
            if a == b:
                raise ValueError(f"limb ({a}, {b}) joins a joint to itself")
        for hip in (self.hip_left, self.hip_right):
            if not 0 <= hip < self.K:
                raise ValueError(f"hip index {hip} out of range for K={self.K}")
        if self.hip_left == self.hip_right:
            raise ValueError("hip_left and hip_right must differ")


@dataclass(frozen=True)
class PoseFrame:
    """One frame of detections; joints has exactly K entries for the owning topology."""

    joints: tuple[Keypoint, ...]
    frame_index: int


@dataclass(frozen=True)
class PoseSequence:
    """An ordered, validated sequence of frames for one subject/recording."""

    frames: tuple[PoseFrame, ...]
    subject_id: str
    sequence_id: str
    topology: Topology
    clamped_confidences: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.frames)


def coco17_topology() -> Topology:
    """The 17-keypoint COCO topology with its standard 19-edge skeleton.

    Hips are joints 11 (left) and 12 (right) under zero-based COCO ordering.
    """
    return Topology(K=17, limbs=COCO17_LIMBS, hip_left=11, hip_right=12)


def _require_number(v, line: int, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise PoseSchemaError(f"line {line}: {what} is not a number")
    return float(v)


def parse_pose_file(
    data: bytes | str,
    topology: Topology,
    subject_id: str = "",
    sequence_id: str = "",
) -> PoseSequence:
    """Parse and validate a JSON-lines pose file into a PoseSequence.

    Keypoint values are preserved exactly (no rounding), except that
    confidences are clamped into [0, 1]; the number of clamped values is
    reported on the returned sequence.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    frames: list[PoseFrame] = []
    clamped = 0
    last_index = -1
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise PoseParseError(lineno, str(e)) from e
        if not isinstance(rec, dict) or "frame" not in rec or "kps" not in rec:
            raise PoseSchemaError(f"line {lineno}: expected object with 'frame' and 'kps'")
        idx = rec["frame"]
        if isinstance(idx, bool) or not isinstance(idx, int) or idx < 0:
            raise PoseSchemaError(f"line {lineno}: 'frame' must be a non-negative integer")
        kps = rec["kps"]
        if not isinstance(kps, list) or len(kps) != topology.K:
            got = len(kps) if isinstance(kps, list) else "non-list"
            raise PoseSchemaError(
                f"frame {idx} (line {lineno}): expected {topology.K} keypoints, got {got}"
            )
        if idx <= last_index:
            raise PoseValidationError(
                f"frame {idx} (line {lineno}): non-increasing frame_index"
            )
        joints = []
        for k, trip in enumerate(kps):
            if not isinstance(trip, list) or len(trip) != 3:
                raise PoseSchemaError(
                    f"frame {idx} (line {lineno}): keypoint {k} is not an [x, y, c] triplet"
                )
            x = _require_number(trip[0], lineno, f"keypoint {k} x")
            y = _require_number(trip[1], lineno, f"keypoint {k} y")
            c = _require_number(trip[2], lineno, f"keypoint {k} confidence")
            if not (math.isfinite(x) and math.isfinite(y)):
                raise PoseValidationError(
                    f"frame {idx} (line {lineno}): keypoint {k} has non-finite coordinates"
                )
            if not math.isfinite(c):
                raise PoseValidationError(
                    f"frame {idx} (line {lineno}): keypoint {k} has non-finite confidence"
                )
            if c < 0.0:
                c = 0.0
                clamped += 1
            elif c > 1.0:
                c = 1.0
                clamped += 1
            joints.append(Keypoint(x, y, c))
        frames.append(PoseFrame(joints=tuple(joints), frame_index=idx))
        last_index = idx
    if not frames:
        raise PoseValidationError("pose file contains no frames")
    return PoseSequence(
        frames=tuple(frames),
        subject_id=subject_id,
        sequence_id=sequence_id,
        topology=topology,
        clamped_confidences=clamped,
    )


def serialize_pose_file(seq: PoseSequence) -> str:
    """Inverse of parse_pose_file; float values round-trip bit-exactly via repr."""
    lines = []
    for frame in seq.frames:
        kps = [[kp.x, kp.y, kp.c] for kp in frame.joints]
        lines.append(json.dumps({"frame": frame.frame_index, "kps": kps}))
    return "\n".join(lines) + "\n"
