"""Command-line entry point.

Subcommands mirror the pipeline stages plus the synthetic generator and the
threshold sweep. Failures exit nonzero with a one-line JSON error on stderr
so batch drivers can parse them.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .anonymize import anonymize_directory
from .evaluation import evaluate_sequence, missing_rate_curve, threshold_sweep
from .formats import load_detections, load_labels, load_poses, save_detections
from .fusion import FusionStrategy, fuse_frames
from .headinfer import infer_heads
from .pipeline import (
    ToolkitConfig,
    load_config,
    pipeline_config_from_dict,
    run_pipeline,
    toolkit_config_from_dict,
)
from .synthetic import ScenarioConfig, generate, scenario_from_dict, write_scene
from .tracking import track_frames

logger = logging.getLogger(__name__)


class _JsonErrorParser(argparse.ArgumentParser):
    def error(self, message: str):
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(2)


def _toolkit(args) -> ToolkitConfig:
    if args.config:
        return toolkit_config_from_dict(load_config(args.config))
    return ToolkitConfig()


def _outdir(args) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_infer_heads(args) -> int:
    tk = _toolkit(args)
    poses = load_poses(args.poses)
    heads = {f: infer_heads(p, tk.head_inference, frame=f) for f, p in poses.items()}
    out = Path(args.out) if args.out else _outdir(args) / "heads.ndjson"
    save_detections(heads, out)
    print(f"wrote {out} ({sum(len(v) for v in heads.values())} head boxes, "
          f"{len(heads)} frames)")
    return 0


def _cmd_fuse(args) -> int:
    tk = _toolkit(args)
    if args.fusion:
        tk.fusion.strategy = FusionStrategy(args.fusion)
    if args.gamma is not None:
        tk.fusion.gamma = args.gamma
    heads = load_detections(args.heads)
    faces = load_detections(args.faces)
    fused = fuse_frames(heads, faces, tk.fusion)
    out = Path(args.out) if args.out else _outdir(args) / "fused.ndjson"
    save_detections(fused, out)
    print(f"wrote {out} ({sum(len(v) for v in fused.values())} boxes, "
          f"strategy {tk.fusion.strategy.value})")
    return 0


def _cmd_track(args) -> int:
    tk = _toolkit(args)
    dets = load_detections(args.dets)
    tracked = track_frames(dets, tk.tracker)
    out = Path(args.out) if args.out else _outdir(args) / "tracked.ndjson"
    save_detections(tracked, out)
    print(f"wrote {out} ({sum(len(v) for v in tracked.values())} tracked boxes)")
    return 0


def _cmd_evaluate(args) -> int:
    tk = _toolkit(args)
    if args.alpha is not None:
        tk.evaluation.alpha = args.alpha
    if args.beta is not None:
        tk.evaluation.beta = args.beta
    if args.size_filter is not None:
        tk.evaluation.size_filter = args.size_filter
    dets = load_detections(args.dets)
    labels = load_labels(args.labels)
    report = evaluate_sequence(dets, labels, tk.evaluation)
    print(report.table(Path(args.dets).stem))
    report_path = Path(args.report) if args.report else _outdir(args) / "report.json"
    report_path.write_text(json.dumps(report.__dict__, indent=2) + "\n")
    print(f"wrote {report_path}")
    if args.missing_curve:
        thresholds = [float(v) for v in args.missing_curve.split(",")]
        curve = missing_rate_curve(dets, labels, tk.evaluation, thresholds)
        curve_path = report_path.with_name(report_path.stem + "_missing.csv")
        with curve_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["threshold", "percent_missed"])
            for t, pct in curve.items():
                writer.writerow([t, "" if pct is None else pct])
        print(f"wrote {curve_path}")
    return 0


def _cmd_sweep(args) -> int:
    tk = _toolkit(args)
    dets = load_detections(args.dets)
    labels = load_labels(args.labels)
    values = [float(v) for v in args.values.split(",")]
    rows = threshold_sweep(dets, labels, args.which, values,
                           size_filter=tk.evaluation.size_filter)
    out = Path(args.out) if args.out else _outdir(args) / f"sweep_{args.which}.csv"
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "both", "face", "head", "none"])
        for row in rows:
            writer.writerow([row["value"], row["both"], row["face"],
                             row["head"], row["none"]])
    print(f"wrote {out}")
    return 0


def _cmd_anonymize(args) -> int:
    tk = _toolkit(args)
    if args.method:
        tk.anonymize.method = args.method
    dets = load_detections(args.dets)
    outdir = Path(args.out) if args.out else _outdir(args) / "anonymized"
    written = anonymize_directory(args.images, dets, outdir, tk.anonymize,
                                  jobs=args.jobs)
    print(f"wrote {len(written)} images to {outdir}")
    return 0


def _cmd_synth(args) -> int:
    if args.scenario:
        cfg = scenario_from_dict(json.loads(Path(args.scenario).read_text()))
    else:
        cfg = ScenarioConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.frames is not None:
        cfg.frames = args.frames
    if args.pedestrians is not None:
        cfg.pedestrians = args.pedestrians
    scene = generate(cfg)
    paths = write_scene(scene, _outdir(args))
    print("wrote " + ", ".join(str(p) for p in paths.values()))
    return 0


def _cmd_run(args) -> int:
    if not args.config:
        raise ValueError("run requires --config")
    raw = load_config(args.config)
    cfg = pipeline_config_from_dict(raw)
    if args.output != "out":
        cfg.output_dir = args.output
    cfg.jobs = args.jobs
    artifacts = run_pipeline(cfg)
    for stage, fps in artifacts["throughput"].items():
        print(f"stage {stage}: {fps:.1f} frames/s")
    if artifacts["report"] is not None:
        print(artifacts["report"].table("pipeline"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _JsonErrorParser(prog="headbox",
                              description="Pedestrian head/face anonymization toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="toolkit config JSON", default=None)
    parser.add_argument("--output", help="output directory", default="out")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer-heads", help="infer head boxes from a pose file")
    p.add_argument("--poses", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_infer_heads)

    p = sub.add_parser("fuse", help="fuse head and face detection files")
    p.add_argument("--heads", required=True)
    p.add_argument("--faces", required=True)
    p.add_argument("--out")
    p.add_argument("--fusion", choices=[s.value for s in FusionStrategy])
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("track", help="track detections across frames")
    p.add_argument("--dets", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_track)

    p = sub.add_parser("evaluate", help="score detections against labels")
    p.add_argument("--dets", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--report")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--size-filter", type=float, dest="size_filter")
    p.add_argument("--missing-curve", dest="missing_curve",
                   help="comma-separated size thresholds for the missing-rate curve")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="sweep a criterion threshold")
    p.add_argument("--dets", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--which", choices=["alpha", "beta"], required=True)
    p.add_argument("--values", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("anonymize", help="blur or pixelate detection regions")
    p.add_argument("--images", required=True, help="image directory or glob")
    p.add_argument("--dets", required=True)
    p.add_argument("--out")
    p.add_argument("--method", choices=["gaussian-blur", "pixelate"])
    p.set_defaults(func=_cmd_anonymize)

    p = sub.add_parser("synth", help="generate a synthetic scene with ground truth")
    p.add_argument("--scenario", help="scenario config JSON")
    p.add_argument("--seed", type=int)
    p.add_argument("--frames", type=int)
    p.add_argument("--pedestrians", type=int)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("run", help="run the config-driven pipeline")
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # surface every failure as machine-readable JSON
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
