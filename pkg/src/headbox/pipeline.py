"""Config-driven pipeline runner.

Chains the processing stages over interchange files on disk: every stage
reloads its input from the previous stage's output file, so a staged run is
byte-for-byte equivalent to running the stages by hand. Detection output is
written after each stage; the evaluate stage adds a JSON report and an
aligned text table.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from .anonymize import AnonymizeConfig, anonymize_directory
from .evaluation import EvalConfig, evaluate_sequence
from .formats import load_detections, load_labels, load_poses, save_detections
from .fusion import FusionConfig, fuse_frames
from .headinfer import HeadInferenceParams, infer_heads
from .tracking import TrackerConfig, track_frames

logger = logging.getLogger(__name__)

STAGE_ORDER = ("infer-heads", "fuse", "track", "evaluate", "anonymize")


class ConfigError(ValueError):
    """The pipeline configuration is unusable."""


@dataclass
class ToolkitConfig:
    """Per-module parameter sections, each overridable from the config file."""

    head_inference: HeadInferenceParams = field(default_factory=HeadInferenceParams)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    evaluation: EvalConfig = field(default_factory=EvalConfig)
    anonymize: AnonymizeConfig = field(default_factory=AnonymizeConfig)


@dataclass
class PipelineConfig:
    stages: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    output_dir: str = "out"
    toolkit: ToolkitConfig = field(default_factory=ToolkitConfig)
    jobs: int = 1


_SECTION_TYPES = {
    "head_inference": HeadInferenceParams,
    "fusion": FusionConfig,
    "tracker": TrackerConfig,
    "evaluation": EvalConfig,
    "anonymize": AnonymizeConfig,
}


def _build_section(cls, values: dict, name: str):
    try:
        return cls(**values)
    except TypeError as exc:
        raise ConfigError(f"section {name!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"section {name!r}: {exc}") from exc


def toolkit_config_from_dict(raw: dict) -> ToolkitConfig:
    """Build module configs from the parsed config file, defaults elsewhere."""
    kwargs = {}
    for name, cls in _SECTION_TYPES.items():
        section = raw.get(name, {})
        if not isinstance(section, dict):
            raise ConfigError(f"section {name!r} must be an object")
        kwargs[name] = _build_section(cls, section, name)
    return ToolkitConfig(**kwargs)


def load_config(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def pipeline_config_from_dict(raw: dict) -> PipelineConfig:
    section = raw.get("pipeline")
    if not isinstance(section, dict):
        raise ConfigError('config needs a "pipeline" section with "stages"')
    stages = section.get("stages")
    if not isinstance(stages, list) or not stages:
        raise ConfigError('"pipeline.stages" must be a non-empty list')
    _check_stage_order(stages)
    inputs = section.get("inputs", {})
    if not isinstance(inputs, dict):
        raise ConfigError('"pipeline.inputs" must be an object')
    return PipelineConfig(
        stages=list(stages),
        inputs={str(k): str(v) for k, v in inputs.items()},
        output_dir=str(section.get("output_dir", "out")),
        toolkit=toolkit_config_from_dict(raw),
    )


def _check_stage_order(stages: list[str]) -> None:
    for stage in stages:
        if stage not in STAGE_ORDER:
            raise ConfigError(f"unknown stage {stage!r}; expected one of {STAGE_ORDER}")
    if len(set(stages)) != len(stages):
        raise ConfigError("stages must not repeat")
    positions = [STAGE_ORDER.index(s) for s in stages]
    if positions != sorted(positions):
        raise ConfigError(f"stages must follow the order {STAGE_ORDER}")


def _require_input(cfg: PipelineConfig, key: str, stage: str) -> Path:
    if key not in cfg.inputs:
        raise ConfigError(f"stage {stage!r} needs input {key!r}")
    path = Path(cfg.inputs[key])
    if not path.exists():
        raise ConfigError(f"input {key!r} does not exist: {path}")
    return path


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Execute the configured stages, returning artifact paths and reports.

    Detections flow between stages through the written files: each stage
    loads the previous stage's output from disk.
    """
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    tk = cfg.toolkit

    artifacts: dict = {"stage_files": {}, "throughput": {}, "report": None}
    current: Path | None = None  # detections produced by the latest stage

    def detections_input(stage: str) -> Path:
        if current is not None:
            return current
        return _require_input(cfg, "detections", stage)

    for index, stage in enumerate(cfg.stages, start=1):
        start = time.perf_counter()
        if stage == "infer-heads":
            poses = load_poses(_require_input(cfg, "poses", stage))
            heads = {
                frame: infer_heads(frame_poses, tk.head_inference, frame=frame)
                for frame, frame_poses in poses.items()
            }
            current = outdir / f"stage{index:02d}_infer-heads.ndjson"
            save_detections(heads, current)
            frames = len(poses)
        elif stage == "fuse":
            heads_path = current if current is not None else _require_input(cfg, "heads", stage)
            heads = load_detections(heads_path)
            faces = load_detections(_require_input(cfg, "faces", stage))
            fused = fuse_frames(heads, faces, tk.fusion)
            current = outdir / f"stage{index:02d}_fuse.ndjson"
            save_detections(fused, current)
            frames = len(fused)
        elif stage == "track":
            dets = load_detections(detections_input(stage))
            tracked = track_frames(dets, tk.tracker)
            current = outdir / f"stage{index:02d}_track.ndjson"
            save_detections(tracked, current)
            frames = len(tracked)
        elif stage == "evaluate":
            dets = load_detections(detections_input(stage))
            labels = load_labels(_require_input(cfg, "labels", stage))
            report = evaluate_sequence(dets, labels, tk.evaluation)
            elapsed = time.perf_counter() - start
            report.throughput = len(dets) / elapsed if elapsed > 0 else 0.0
            report_path = outdir / "report.json"
            report_path.write_text(json.dumps(report.__dict__, indent=2) + "\n")
            (outdir / "report.txt").write_text(report.table() + "\n")
            artifacts["report"] = report
            artifacts["stage_files"]["evaluate"] = report_path
            frames = len(dets)
        else:  # anonymize
            dets = load_detections(detections_input(stage))
            images = _require_input(cfg, "images", stage)
            written = anonymize_directory(images, dets, outdir / "anonymized",
                                          tk.anonymize, jobs=cfg.jobs)
            artifacts["stage_files"]["anonymize"] = outdir / "anonymized"
            frames = len(written)

        if stage in ("infer-heads", "fuse", "track"):
            artifacts["stage_files"][stage] = current
        elapsed = time.perf_counter() - start
        fps = frames / elapsed if elapsed > 0 else 0.0
        artifacts["throughput"][stage] = fps
        logger.info("stage %s: %d frames in %.3fs (%.1f frames/s)",
                    stage, frames, elapsed, fps)

    return artifacts
