"""Head bounding box inference from a body-pose skeleton.

Two constructions, tried in order:

* facial route: enough facial keypoints are present and the torso gives a
  scale reference; the box is centered on the mean facial keypoint.
* shoulder route: no usable facial keypoints; the box sits one neck length
  above the shoulder midpoint, horizontally centered between the shoulders.

Box size is always a fixed ratio of the torso length (shoulder midpoint to
hip midpoint). The default ratios are tuning knobs, not universal constants;
calibrate them on your own footage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    FACIAL_KEYPOINTS,
    HIP_KEYPOINTS,
    SHOULDER_KEYPOINTS,
    BBox,
    Detection,
    Pose,
    Source,
)


@dataclass
class HeadInferenceParams:
    """Geometry ratios and presence thresholds for head inference.

    r_w, r_h: head width/height as a fraction of torso length.
    r_n: neck length as a fraction of head height.
    tau_kp: minimum keypoint confidence to count a keypoint as present.
    min_facial: minimum present facial keypoints for the facial route.
    """

    r_w: float = 0.50
    r_h: float = 0.65
    r_n: float = 0.25
    tau_kp: float = 0.2
    min_facial: int = 1

    def __post_init__(self):
        if self.r_w <= 0 or self.r_h <= 0 or self.r_n <= 0:
            raise ValueError("head/neck ratios must be positive")
        if not 0.0 <= self.tau_kp <= 1.0:
            raise ValueError("tau_kp must lie in [0, 1]")
        if not 1 <= self.min_facial <= 5:
            raise ValueError("min_facial must lie in 1..5")


def _midpoint(pose: Pose, indices: list[int]) -> np.ndarray:
    return np.mean([pose.xy(i) for i in indices], axis=0)


def torso_length(pose: Pose, params: HeadInferenceParams) -> float | None:
    """Distance from the shoulder midpoint to the hip midpoint, or None.

    A single present shoulder (or hip) stands in for its midpoint. Returns
    None when no shoulder or no hip is present.
    """
    shoulders = pose.present(SHOULDER_KEYPOINTS, params.tau_kp)
    hips = pose.present(HIP_KEYPOINTS, params.tau_kp)
    if not shoulders or not hips:
        return None
    return float(np.linalg.norm(_midpoint(pose, shoulders) - _midpoint(pose, hips)))


def infer_head(pose: Pose, params: HeadInferenceParams | None = None) -> Detection | None:
    """Infer a head Detection from one pose, or None when the skeleton
    carries neither enough facial keypoints nor a shoulder/hip pair.

    The detection confidence is the mean confidence of every keypoint the
    construction used.
    """
    if params is None:
        params = HeadInferenceParams()

    shoulders = pose.present(SHOULDER_KEYPOINTS, params.tau_kp)
    hips = pose.present(HIP_KEYPOINTS, params.tau_kp)
    torso = torso_length(pose, params)
    if torso is None or torso <= 0:
        # A coincident shoulder/hip midpoint gives no scale reference.
        return None

    width = params.r_w * torso
    height = params.r_h * torso

    facial = pose.present(FACIAL_KEYPOINTS, params.tau_kp)
    if len(facial) >= params.min_facial:
        cx, cy = _midpoint(pose, facial)
        bbox = BBox.from_center(float(cx), float(cy), width, height)
        used = facial + shoulders + hips
    else:
        mx, my = _midpoint(pose, shoulders)
        bottom = float(my) - params.r_n * height
        bbox = BBox(float(mx) - width / 2, bottom - height, float(mx) + width / 2, bottom)
        used = shoulders + hips

    confidence = float(np.mean([pose.confidence(i) for i in used]))
    return Detection(bbox=bbox, confidence=confidence, source=Source.HEAD)


def infer_heads(poses: list[Pose], params: HeadInferenceParams | None = None,
                frame: int = 0) -> list[Detection]:
    """Run infer_head over every pose in a frame, dropping the misses."""
    out = []
    for pose in poses:
        det = infer_head(pose, params)
        if det is not None:
            det.frame = frame
            out.append(det)
    return out
