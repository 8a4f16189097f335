"""Batch orchestration: manifest of pose files in, tensor files out.

For every sequence listed in the manifest, each frame is normalized,
rendered to a (2, R, R) skeleton map, and framed down to the model input
size; a fixed-length segment of frames is then sampled and written as one
tensor container of shape (T, 2, out_h, out_w), with optional PNG
visualizations.

Rendering is parallelized over frames with a thread pool (the compiled
kernel releases the GIL). Results are gathered in frame order and every
per-sequence random decision is seeded from (seed, subject, sequence), so
output bytes are identical for any thread count and any scheduling.
"""

from __future__ import annotations

import hashlib
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from gaitmap.errors import (
    ConfigError,
    DegenerateFrameError,
    EmptyMapError,
    GaitMapError,
)
from gaitmap.framing import CROP_EPSILON, frame_map
from gaitmap.normalize import normalize_frame
from gaitmap.pose import PoseSequence, Topology, coco17_topology, parse_pose_file
from gaitmap.render import RenderOptions, render_skeleton_map
from gaitmap.tensorfile import write_tensor_file
from gaitmap.visual import export_png

# Gaussian spreads used for qualitative side-by-side comparisons
# (thin skeleton at 1.0 through blurry at 16.0).
SIGMA_SWEEP = (1.0, 4.0, 8.0, 16.0)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything run_pipeline needs; R defaults to 2*H when left None.

    segment_len picks a fixed-length window per sequence (cyclic wrap for
    shorter sequences); 0 disables sampling and writes every frame.
    """

    manifest: Path
    out_dir: Path
    sigma: float = 8.0
    H: int = 64
    R: int | None = None
    out_h: int = 64
    out_w: int = 44
    epsilon_crop: float = CROP_EPSILON
    threads: int = 1
    png_export: bool = False
    segment_len: int = 30
    seed: int = 0
    skip_degenerate: bool = True
    literal_eq1: bool = False
    truncation_radius: float = 6.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.R is not None and self.R < self.H:
            raise ConfigError(f"canvas R={self.R} must be >= body height H={self.H}")
        if self.segment_len < 0:
            raise ConfigError(f"segment_len must be >= 0, got {self.segment_len}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.out_h < 1 or self.out_w < 1:
            raise ConfigError(f"output size must be positive, got {self.out_h}x{self.out_w}")
        if self.out_w >= self.out_h or (self.out_h - self.out_w) % 2 != 0:
            raise ConfigError(
                f"double-side cut needs an even positive surplus, got {self.out_h}->{self.out_w}"
            )

    @property
    def canvas(self) -> int:
        return self.R if self.R is not None else 2 * self.H


@dataclass
class SequenceResult:
    """Per-sequence outcome; error is None on success."""

    subject_id: str
    sequence_id: str
    frames_total: int = 0
    frames_processed: int = 0
    frames_skipped: int = 0
    clamped_confidences: int = 0
    output_path: Path | None = None
    error: str | None = None


@dataclass
class RunReport:
    """Aggregate of per-sequence results."""

    results: list[SequenceResult] = field(default_factory=list)

    @property
    def failures(self) -> list[SequenceResult]:
        return [r for r in self.results if r.error is not None]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary_lines(self) -> list[str]:
        lines = []
        for r in self.results:
            status = f"FAILED: {r.error}" if r.error else f"wrote {r.output_path}"
            lines.append(
                f"{r.subject_id}/{r.sequence_id}: {r.frames_processed}/{r.frames_total} frames"
                f" ({r.frames_skipped} skipped, {r.clamped_confidences} confidences clamped)"
                f" -> {status}"
            )
        lines.append(
            f"{len(self.results)} sequences, {len(self.failures)} failed"
        )
        return lines


def sample_segment(seq_len: int, segment_len: int, rng_seed: int) -> list[int]:
    """Frame indices of a fixed-length contiguous window.

    The start is drawn uniformly with the seeded generator; sequences
    shorter than the segment wrap cyclically from frame 0.
    """
    if seq_len < 1:
        raise ValueError(f"seq_len must be >= 1, got {seq_len}")
    if segment_len < 1:
        raise ValueError(f"segment_len must be >= 1, got {segment_len}")
    if seq_len >= segment_len:
        rng = np.random.default_rng(rng_seed)
        start = int(rng.integers(0, seq_len - segment_len + 1))
        return list(range(start, start + segment_len))
    return [i % seq_len for i in range(segment_len)]


def load_manifest(path: Path) -> list[dict]:
    """Read the sequence manifest; pose paths are resolved against its directory."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or not isinstance(doc.get("sequences"), list):
        raise ConfigError(f"{path}: manifest must be an object with a 'sequences' list")
    base = Path(path).parent
    entries = []
    for i, rec in enumerate(doc["sequences"]):
        if not isinstance(rec, dict):
            raise ConfigError(f"{path}: sequences[{i}] is not an object")
        for key in ("subject_id", "sequence_id", "pose_file"):
            if key not in rec or not isinstance(rec[key], str):
                raise ConfigError(f"{path}: sequences[{i}] missing string field {key!r}")
        entries.append(
            {
                "subject_id": rec["subject_id"],
                "sequence_id": rec["sequence_id"],
                "pose_file": base / rec["pose_file"],
            }
        )
    return entries


def _sequence_seed(seed: int, subject_id: str, sequence_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{subject_id}:{sequence_id}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _safe_name(text: str) -> str:
    return re.sub(r"[^-._a-zA-Z0-9]", "_", text) or "_"


def _render_one(frame, topology: Topology, cfg: PipelineConfig):
    """normalize -> render -> frame for one pose frame; None when skippable."""
    opts = RenderOptions(sigma=cfg.sigma, truncation_radius=cfg.truncation_radius)
    try:
        nf = normalize_frame(
            frame, topology, cfg.H, cfg.canvas, literal_eq1=cfg.literal_eq1
        )
        smap = render_skeleton_map(nf, topology, opts)
        framed = frame_map(smap, cfg.H, cfg.out_h, cfg.out_w, cfg.epsilon_crop)
    except (DegenerateFrameError, EmptyMapError) as e:
        if cfg.skip_degenerate:
            return None
        raise DegenerateFrameError(f"frame {frame.frame_index}: {e}") from e
    return framed.data


def run_pipeline(cfg: PipelineConfig, topology: Topology | None = None) -> RunReport:
    """Process every manifest sequence; returns the run report.

    I/O or validation errors abort only the affected sequence and are
    recorded on its result entry.
    """
    topology = topology or coco17_topology()
    entries = load_manifest(cfg.manifest)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = RunReport()

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        parsed: list[tuple[dict, PoseSequence | None, SequenceResult]] = []
        for entry in entries:
            result = SequenceResult(entry["subject_id"], entry["sequence_id"])
            report.results.append(result)
            try:
                data = Path(entry["pose_file"]).read_bytes()
                seq = parse_pose_file(
                    data,
                    topology,
                    subject_id=entry["subject_id"],
                    sequence_id=entry["sequence_id"],
                )
            except (OSError, GaitMapError) as e:
                result.error = str(e)
                parsed.append((entry, None, result))
                continue
            result.frames_total = len(seq)
            result.clamped_confidences = seq.clamped_confidences
            parsed.append((entry, seq, result))

        # Submit every frame of every healthy sequence up front, then gather
        # in frame order per sequence: deterministic output for any pool size.
        futures = {}
        for entry, seq, result in parsed:
            if seq is None:
                continue
            futures[id(result)] = [
                pool.submit(_render_one, frame, topology, cfg) for frame in seq.frames
            ]

        for entry, seq, result in parsed:
            if seq is None:
                continue
            rendered = []
            try:
                for fut in futures[id(result)]:
                    out = fut.result()
                    if out is None:
                        result.frames_skipped += 1
                    else:
                        rendered.append(out)
            except GaitMapError as e:
                result.error = str(e)
                continue
            result.frames_processed = len(rendered)
            if not rendered:
                result.error = "no renderable frames after skipping degenerate ones"
                continue
            if cfg.segment_len > 0:
                seed = _sequence_seed(cfg.seed, result.subject_id, result.sequence_id)
                indices = sample_segment(len(rendered), cfg.segment_len, seed)
            else:
                indices = list(range(len(rendered)))
            tensor = np.stack([rendered[i] for i in indices])
            name = f"{_safe_name(result.subject_id)}-{_safe_name(result.sequence_id)}"
            out_path = out_dir / f"{name}.gmap"
            try:
                write_tensor_file(out_path, tensor)
                if cfg.png_export:
                    png_dir = out_dir / name
                    png_dir.mkdir(exist_ok=True)
                    for pos, idx in enumerate(indices):
                        export_png(rendered[idx], png_dir / f"{pos:04d}.png")
            except OSError as e:
                result.error = f"write failed: {e}"
                continue
            result.output_path = out_path
    return report
