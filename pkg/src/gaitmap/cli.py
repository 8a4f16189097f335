"""Command-line interface.

    gaitmap render --manifest poses/manifest.json --out out/
    gaitmap sweep  --pose poses/seq.jsonl --out out/ --frame 0
    gaitmap bench  --frames 30

``render`` runs the batch pipeline; exit code 0 iff no sequence failed.
``sweep`` renders one frame at each preset Gaussian spread (1, 4, 8, 16)
to PNGs for qualitative comparison. ``bench`` times the compiled kernel
against the numpy fallback.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from gaitmap.errors import GaitMapError
from gaitmap.pipeline import SIGMA_SWEEP, PipelineConfig, run_pipeline


def _parse_out_size(text: str) -> tuple[int, int]:
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, e.g. 64x44, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaitmap",
        description="Render pose keypoint sequences into skeleton-map tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="run the batch pipeline over a manifest")
    render.add_argument("--manifest", type=Path, required=True, help="sequence manifest JSON")
    render.add_argument("--out", type=Path, required=True, help="output directory")
    render.add_argument("--sigma", type=float, default=8.0, help="Gaussian spread in pixels")
    render.add_argument("--height", type=int, default=64, help="normalized body height H")
    render.add_argument("--canvas", type=int, default=None, help="canvas size R (default 2*H)")
    render.add_argument(
        "--out-size", type=_parse_out_size, default=(64, 44), metavar="HxW",
        help="final map size after crop/resize/cut (default 64x44)",
    )
    render.add_argument("--threads", type=int, default=1, help="render worker threads")
    render.add_argument("--png", action="store_true", help="also write PNG visualizations")
    render.add_argument("--seed", type=int, default=0, help="segment sampling seed")
    render.add_argument(
        "--segment-len", type=int, default=30,
        help="frames per output segment; 0 writes the whole sequence",
    )
    render.add_argument(
        "--literal-eq1", action="store_true",
        help="compatibility mode: sequential-assignment normalization (comparison only)",
    )
    render.add_argument(
        "--epsilon-crop", type=float, default=1e-4,
        help="threshold defining non-zero pixels for the subject-centered crop",
    )
    render.add_argument(
        "--keep-degenerate", action="store_true",
        help="fail a sequence on degenerate frames instead of skipping them",
    )

    sweep = sub.add_parser(
        "sweep", help=f"render one frame at each sigma in {SIGMA_SWEEP} to PNGs"
    )
    sweep.add_argument("--pose", type=Path, required=True, help="pose JSONL file")
    sweep.add_argument("--out", type=Path, required=True, help="output directory")
    sweep.add_argument("--frame", type=int, default=0, help="frame position in the file")
    sweep.add_argument("--height", type=int, default=64)
    sweep.add_argument("--canvas", type=int, default=None)

    bench = sub.add_parser("bench", help="compare compiled and numpy render kernels")
    bench.add_argument("--frames", type=int, default=30, help="random frames per backend")
    bench.add_argument("--sigma", type=float, default=8.0)
    bench.add_argument("--canvas", type=int, default=128)
    bench.add_argument("--repeat", type=int, default=3, help="best-of repetitions")

    return parser


def _cmd_render(args) -> int:
    cfg = PipelineConfig(
        manifest=args.manifest,
        out_dir=args.out,
        sigma=args.sigma,
        H=args.height,
        R=args.canvas,
        out_h=args.out_size[0],
        out_w=args.out_size[1],
        epsilon_crop=args.epsilon_crop,
        threads=args.threads,
        png_export=args.png,
        segment_len=args.segment_len,
        seed=args.seed,
        skip_degenerate=not args.keep_degenerate,
        literal_eq1=args.literal_eq1,
    )
    report = run_pipeline(cfg)
    for line in report.summary_lines():
        print(line)
    return 0 if report.ok else 1


def _cmd_sweep(args) -> int:
    from gaitmap.framing import frame_map
    from gaitmap.normalize import normalize_frame
    from gaitmap.pose import coco17_topology, parse_pose_file
    from gaitmap.render import RenderOptions, render_skeleton_map
    from gaitmap.visual import export_png

    topology = coco17_topology()
    seq = parse_pose_file(args.pose.read_bytes(), topology)
    if not 0 <= args.frame < len(seq):
        print(f"frame {args.frame} out of range (sequence has {len(seq)})", file=sys.stderr)
        return 1
    H = args.height
    R = args.canvas if args.canvas is not None else 2 * H
    nf = normalize_frame(seq.frames[args.frame], topology, H, R)
    args.out.mkdir(parents=True, exist_ok=True)
    for sigma in SIGMA_SWEEP:
        smap = render_skeleton_map(nf, topology, RenderOptions(sigma=sigma))
        framed = frame_map(smap, H)
        path = args.out / f"sigma_{sigma:g}.png"
        export_png(framed, path)
        print(f"wrote {path}")
    return 0


def _cmd_bench(args) -> int:
    from gaitmap.bench import run_benchmark

    run_benchmark(
        frames=args.frames, sigma=args.sigma, canvas=args.canvas, repeat=args.repeat
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            return _cmd_render(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_bench(args)
    except (GaitMapError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
