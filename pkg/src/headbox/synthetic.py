"""Synthetic pedestrian scenes with exact ground truth.

Pedestrians are articulated stick figures (keypoint trajectories), not
rendered images: the generator emits mutually consistent labels, poses and
face-detector output, plus a tally of what each channel saw, so pipeline
results can be checked against a known plant.

The body is built from the same head/torso proportions the head-inference
module assumes, which makes the zero-noise pipeline reproduce labels
exactly. Two effects observed on real footage are modeled directly: the
face channel drops heads below a size cutoff, and walking adds a sinusoidal
vertical bob that a constant-velocity tracker cannot follow.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .evaluation import LabeledFrame
from .formats import save_detections, save_labels, save_poses
from .geometry import (
    FACIAL_KEYPOINTS,
    LEFT_ANKLE,
    LEFT_HIP,
    LEFT_KNEE,
    LEFT_SHOULDER,
    NUM_KEYPOINTS,
    RIGHT_ANKLE,
    RIGHT_HIP,
    RIGHT_KNEE,
    RIGHT_SHOULDER,
    BBox,
    Detection,
    Pose,
    Source,
)
from .headinfer import HeadInferenceParams

FACE_WIDTH_FRACTION = 0.6  # face label width relative to head width; full height


@dataclass
class FaceDetectorModel:
    """Behavior of the simulated face channel."""

    drop_below_px: float = 0.0          # no detection when face max_dim < this
    jitter_px: float = 0.0              # uniform center jitter
    confidence_range: tuple[float, float] = (0.5, 0.9)


@dataclass
class PoseModel:
    """Behavior of the simulated pose channel."""

    keypoint_noise_px: float = 0.0
    facial_dropout: float = 1.0         # per-keypoint drop prob when back-facing
    confidence_range: tuple[float, float] = (0.6, 1.0)


@dataclass
class ScenarioConfig:
    pedestrians: int = 1
    frames: int = 50
    seed: int = 0
    # Head max_dim in pixels at the first and last frame (linear in between);
    # models pedestrians approaching or walking away.
    depth_range: tuple[float, float] = (60.0, 60.0)
    walk_speed: float = 5.0             # px/frame along x
    bob_amplitude: float = 0.0          # sinusoidal vertical head bob
    bob_frequency: float = 0.1          # cycles per frame
    back_facing: int = 0                # the last k pedestrians walk away from camera
    # Annotation horizon: pedestrians whose head is smaller carry no labels,
    # mirroring footage where distant people are beyond recognizability.
    label_min_px: float = 0.0
    distant_pedestrians: int = 0        # extra small walkers past the horizon
    distant_size_px: float = 10.0
    face_detector: FaceDetectorModel = field(default_factory=FaceDetectorModel)
    pose_model: PoseModel = field(default_factory=PoseModel)
    proportions: HeadInferenceParams = field(default_factory=HeadInferenceParams)

    def __post_init__(self):
        if self.pedestrians < 0 or self.frames < 0 or self.distant_pedestrians < 0:
            raise ValueError("counts must be non-negative")
        if not 0 <= self.back_facing <= self.pedestrians:
            raise ValueError("back_facing must not exceed pedestrians")
        for lo, hi in (self.face_detector.confidence_range,
                       self.pose_model.confidence_range):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError("confidence ranges must satisfy 0 <= lo <= hi <= 1")


@dataclass
class SyntheticScene:
    """Generated channels plus the per-pedestrian ground-truth tally."""

    poses_by_frame: dict[int, list[Pose]]
    faces_by_frame: dict[int, list[Detection]]
    labels_by_frame: dict[int, LabeledFrame]
    tally: dict


def _head_geometry(cx: float, cy: float, head_h: float,
                   prop: HeadInferenceParams) -> dict[str, float]:
    """Body landmarks for a head of height head_h centered at (cx, cy)."""
    torso = head_h / prop.r_h
    head_w = prop.r_w * torso
    neck = prop.r_n * head_h
    shoulder_y = cy + head_h / 2 + neck
    return {
        "torso": torso, "head_w": head_w,
        "shoulder_y": shoulder_y, "hip_y": shoulder_y + torso,
        "shoulder_dx": 0.18 * torso, "hip_dx": 0.12 * torso,
    }


def _build_pose(cx: float, cy: float, head_h: float, facial_present: np.ndarray,
                noise_px: float, conf_range: tuple[float, float],
                prop: HeadInferenceParams, rng: np.random.Generator) -> Pose:
    geo = _head_geometry(cx, cy, head_h, prop)
    arr = np.zeros((NUM_KEYPOINTS, 3))

    def put(idx: int, x: float, y: float) -> None:
        jx, jy = (rng.normal(0.0, noise_px, size=2) if noise_px > 0 else (0.0, 0.0))
        arr[idx] = (x + jx, y + jy, rng.uniform(*conf_range))

    for k, idx in enumerate(FACIAL_KEYPOINTS):
        if facial_present[k]:
            put(idx, cx, cy)  # facial keypoints sit at the face center
    put(LEFT_SHOULDER, cx - geo["shoulder_dx"], geo["shoulder_y"])
    put(RIGHT_SHOULDER, cx + geo["shoulder_dx"], geo["shoulder_y"])
    put(LEFT_HIP, cx - geo["hip_dx"], geo["hip_y"])
    put(RIGHT_HIP, cx + geo["hip_dx"], geo["hip_y"])
    put(LEFT_KNEE, cx - geo["hip_dx"], geo["hip_y"] + 0.8 * geo["torso"])
    put(RIGHT_KNEE, cx + geo["hip_dx"], geo["hip_y"] + 0.8 * geo["torso"])
    put(LEFT_ANKLE, cx - geo["hip_dx"], geo["hip_y"] + 1.6 * geo["torso"])
    put(RIGHT_ANKLE, cx + geo["hip_dx"], geo["hip_y"] + 1.6 * geo["torso"])
    return Pose(arr)


def generate(cfg: ScenarioConfig) -> SyntheticScene:
    """Deterministically generate a scene from the scenario config."""
    rng = np.random.default_rng(cfg.seed)
    prop = cfg.proportions
    n_total = cfg.pedestrians + cfg.distant_pedestrians
    max_size = max(cfg.depth_range[0], cfg.depth_range[1], cfg.distant_size_px, 1.0)
    lane = 3.0 * max_size + 2.0 * cfg.bob_amplitude + 20.0

    poses_by_frame: dict[int, list[Pose]] = {}
    faces_by_frame: dict[int, list[Detection]] = {}
    labels_by_frame: dict[int, LabeledFrame] = {}
    records = []

    for t in range(cfg.frames):
        u = t / (cfg.frames - 1) if cfg.frames > 1 else 0.0
        poses, face_dets = [], []
        face_labels, head_labels, links = [], [], {}

        for i in range(n_total):
            distant = i >= cfg.pedestrians
            front = distant or i < cfg.pedestrians - cfg.back_facing
            if distant:
                head_h = cfg.distant_size_px
            else:
                head_h = (1 - u) * cfg.depth_range[0] + u * cfg.depth_range[1]
            direction = 1.0 if i % 2 == 0 else -1.0
            cx = 100.0 + 37.0 * i + direction * cfg.walk_speed * t
            cy = float(lane * (i + 1)
                       + cfg.bob_amplitude * np.sin(2 * np.pi * cfg.bob_frequency * t + 0.7 * i))

            geo = _head_geometry(cx, cy, head_h, prop)
            head_box = BBox.from_center(cx, cy, geo["head_w"], head_h)
            face_box = BBox.from_center(cx, cy, FACE_WIDTH_FRACTION * geo["head_w"], head_h)

            labeled = head_h >= cfg.label_min_px
            if labeled:
                head_labels.append(head_box)
                if front:
                    links[len(face_labels)] = len(head_labels) - 1
                    face_labels.append(face_box)

            # Face channel: only sees fronts, drops small faces.
            pm, fm = cfg.pose_model, cfg.face_detector
            face_detected = front and face_box.max_dim >= fm.drop_below_px
            if face_detected:
                jx, jy = (rng.uniform(-fm.jitter_px, fm.jitter_px, size=2)
                          if fm.jitter_px > 0 else (0.0, 0.0))
                face_dets.append(Detection(
                    bbox=face_box.translated(float(jx), float(jy)),
                    confidence=float(rng.uniform(*fm.confidence_range)),
                    source=Source.FACE, frame=t))

            # Pose channel: always fires; facial keypoints drop when back-facing.
            if front:
                facial_present = np.ones(len(FACIAL_KEYPOINTS), dtype=bool)
            else:
                facial_present = rng.uniform(size=len(FACIAL_KEYPOINTS)) >= pm.facial_dropout
            poses.append(_build_pose(cx, cy, head_h, facial_present,
                                     pm.keypoint_noise_px, pm.confidence_range,
                                     prop, rng))

            records.append({
                "frame": t, "pedestrian": i, "labeled": bool(labeled),
                "front": bool(front), "head_max_dim": float(head_h),
                "face_label": bool(labeled and front),
                "face_detected": bool(face_detected), "pose_detected": True,
            })

        poses_by_frame[t] = poses
        faces_by_frame[t] = face_dets
        labels_by_frame[t] = LabeledFrame(frame=t, face_labels=face_labels,
                                          head_labels=head_labels, face_to_head=links)

    totals = {
        "labeled_front": sum(1 for r in records if r["labeled"] and r["front"]),
        "labeled_back": sum(1 for r in records if r["labeled"] and not r["front"]),
        "unlabeled_detected": sum(1 for r in records if not r["labeled"]
                                  and (r["face_detected"] or r["pose_detected"])),
        "face_detections": sum(1 for r in records if r["face_detected"]),
    }
    tally = {"config": _config_dict(cfg), "totals": totals, "records": records}
    return SyntheticScene(poses_by_frame, faces_by_frame, labels_by_frame, tally)


def _config_dict(cfg: ScenarioConfig) -> dict:
    out = asdict(cfg)
    out["depth_range"] = list(cfg.depth_range)
    return out


def scenario_from_dict(raw: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed JSON (nested sections optional)."""
    values = dict(raw)
    try:
        if "depth_range" in values:
            values["depth_range"] = tuple(values["depth_range"])
        for key, cls in (("face_detector", FaceDetectorModel),
                         ("pose_model", PoseModel),
                         ("proportions", HeadInferenceParams)):
            if key in values:
                section = dict(values[key])
                if "confidence_range" in section:
                    section["confidence_range"] = tuple(section["confidence_range"])
                values[key] = cls(**section)
        return ScenarioConfig(**values)
    except TypeError as exc:
        raise ValueError(f"bad scenario config: {exc}") from exc


def write_scene(scene: SyntheticScene, outdir: str | Path) -> dict[str, Path]:
    """Write poses.ndjson, faces.ndjson, labels.ndjson and tally.json."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "poses": outdir / "poses.ndjson",
        "faces": outdir / "faces.ndjson",
        "labels": outdir / "labels.ndjson",
        "tally": outdir / "tally.json",
    }
    save_poses(scene.poses_by_frame, paths["poses"])
    save_detections(scene.faces_by_frame, paths["faces"])
    save_labels(scene.labels_by_frame, paths["labels"])
    paths["tally"].write_text(json.dumps(scene.tally, indent=2) + "\n")
    return paths
