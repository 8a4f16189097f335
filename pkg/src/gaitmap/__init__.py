"""Skeleton-map gait preprocessing and a toy two-branch fusion network."""

from gaitmap.errors import (
    ConfigError,
    DegenerateFrameError,
    EmptyMapError,
    GaitMapError,
    PoseParseError,
    PoseSchemaError,
    PoseValidationError,
    TensorFormatError,
)
from gaitmap.normalize import NormalizedFrame, normalize_frame
from gaitmap.pose import (
    Keypoint,
    PoseFrame,
    PoseSequence,
    Topology,
    coco17_topology,
    parse_pose_file,
    serialize_pose_file,
)
from gaitmap.render import (
    RenderOptions,
    SkeletonMap,
    active_backend,
    render_joint_map,
    render_limb_map,
    render_skeleton_map,
    render_skeleton_map_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateFrameError",
    "EmptyMapError",
    "GaitMapError",
    "Keypoint",
    "NormalizedFrame",
    "PoseFrame",
    "PoseParseError",
    "PoseSchemaError",
    "PoseSequence",
    "PoseValidationError",
    "RenderOptions",
    "SkeletonMap",
    "TensorFormatError",
    "Topology",
    "active_backend",
    "coco17_topology",
    "normalize_frame",
    "parse_pose_file",
    "render_joint_map",
    "render_limb_map",
    "render_skeleton_map",
    "render_skeleton_map_bruteforce",
    "serialize_pose_file",
    "__version__",
]
