"""Pixel-space primitives: boxes, keypoints, poses and the overlap measures
shared by every other module.

Coordinates are continuous reals in image space (y grows downward).
Rasterization to integer pixels happens only in the anonymizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# COCO keypoint ordering (17 slots).
NOSE = 0
LEFT_EYE = 1
RIGHT_EYE = 2
LEFT_EAR = 3
RIGHT_EAR = 4
LEFT_SHOULDER = 5
RIGHT_SHOULDER = 6
LEFT_ELBOW = 7
RIGHT_ELBOW = 8
LEFT_WRIST = 9
RIGHT_WRIST = 10
LEFT_HIP = 11
RIGHT_HIP = 12
LEFT_KNEE = 13
RIGHT_KNEE = 14
LEFT_ANKLE = 15
RIGHT_ANKLE = 16

NUM_KEYPOINTS = 17
FACIAL_KEYPOINTS = (NOSE, LEFT_EYE, RIGHT_EYE, LEFT_EAR, RIGHT_EAR)
SHOULDER_KEYPOINTS = (LEFT_SHOULDER, RIGHT_SHOULDER)
HIP_KEYPOINTS = (LEFT_HIP, RIGHT_HIP)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned rectangle in pixel coordinates, x_min <= x_max, y_min <= y_max.

    Degenerate (zero-area) boxes are allowed; operations that cannot handle
    them raise ValueError.
    """

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(
                f"invalid box: ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def max_dim(self) -> float:
        return max(self.width, self.height)

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    def translated(self, dx: float, dy: float) -> "BBox":
        return BBox(self.x_min + dx, self.y_min + dy, self.x_max + dx, self.y_max + dy)

    def scaled(self, s: float) -> "BBox":
        """Scale about the origin (both corners multiplied by s > 0)."""
        if s <= 0:
            raise ValueError("scale factor must be positive")
        return BBox(self.x_min * s, self.y_min * s, self.x_max * s, self.y_max * s)

    def inflated(self, ratio: float) -> "BBox":
        """Grow width and height by `ratio` (e.g. 0.1 = 10%), keeping the center."""
        dx = 0.5 * ratio * self.width
        dy = 0.5 * ratio * self.height
        return BBox(self.x_min - dx, self.y_min - dy, self.x_max + dx, self.y_max + dy)

    @staticmethod
    def from_center(cx: float, cy: float, width: float, height: float) -> "BBox":
        return BBox(cx - width / 2, cy - height / 2, cx + width / 2, cy + height / 2)


def intersect_area(a: BBox, b: BBox) -> float:
    """Area of the intersection rectangle, 0 when disjoint."""
    w = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    h = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if w <= 0 or h <= 0:
        return 0.0
    return w * h


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union in [0, 1]; 0 when both boxes are degenerate."""
    inter = intersect_area(a, b)
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return inter / union


def containment_ratio(inner: BBox, outer: BBox) -> float:
    """Fraction of `inner` covered by `outer`, in [0, 1].

    Raises ValueError for a zero-area inner box.
    """
    if inner.area <= 0:
        raise ValueError("containment_ratio: inner box has zero area")
    return intersect_area(inner, outer) / inner.area


def center_distance(a: BBox, b: BBox) -> float:
    """Euclidean distance between box centers, in pixels."""
    (ax, ay), (bx, by) = a.center, b.center
    return math.hypot(ax - bx, ay - by)


@dataclass(frozen=True)
class Keypoint:
    """One COCO keypoint. confidence == 0 means absent (position meaningless)."""

    index: int
    x: float
    y: float
    confidence: float

    def __post_init__(self):
        if not 0 <= self.index < NUM_KEYPOINTS:
            raise ValueError(f"keypoint index {self.index} outside 0..{NUM_KEYPOINTS - 1}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"keypoint confidence {self.confidence} outside [0, 1]")


class Pose:
    """A 17-slot COCO skeleton, stored as a (17, 3) array of (x, y, confidence)."""

    __slots__ = ("keypoints",)

    def __init__(self, keypoints: np.ndarray):
        arr = np.asarray(keypoints, dtype=float)
        if arr.shape != (NUM_KEYPOINTS, 3):
            raise ValueError(f"pose expects shape (17, 3), got {arr.shape}")
        if ((arr[:, 2] < 0) | (arr[:, 2] > 1)).any():
            raise ValueError("keypoint confidences must lie in [0, 1]")
        self.keypoints = arr

    @classmethod
    def empty(cls) -> "Pose":
        return cls(np.zeros((NUM_KEYPOINTS, 3)))

    @classmethod
    def from_keypoints(cls, kps: list[Keypoint]) -> "Pose":
        arr = np.zeros((NUM_KEYPOINTS, 3))
        seen = set()
        for kp in kps:
            if kp.index in seen:
                raise ValueError(f"duplicate keypoint index {kp.index}")
            seen.add(kp.index)
            arr[kp.index] = (kp.x, kp.y, kp.confidence)
        return cls(arr)

    def keypoint(self, index: int) -> Keypoint:
        x, y, c = self.keypoints[index]
        return Keypoint(index, x, y, c)

    def xy(self, index: int) -> np.ndarray:
        return self.keypoints[index, :2]

    def confidence(self, index: int) -> float:
        return float(self.keypoints[index, 2])

    def present(self, indices, threshold: float) -> list[int]:
        """Indices from `indices` whose confidence is at least `threshold`."""
        return [i for i in indices if self.keypoints[i, 2] >= threshold]

    def __eq__(self, other) -> bool:
        return isinstance(other, Pose) and np.array_equal(self.keypoints, other.keypoints)

    def __repr__(self) -> str:
        n = int((self.keypoints[:, 2] > 0).sum())
        return f"Pose({n} present keypoints)"


class Source(str, Enum):
    """Which detector family produced a detection."""

    FACE = "face"
    HEAD = "head"


@dataclass
class Detection:
    """A scored box from either channel, attached to a frame index."""

    bbox: BBox
    confidence: float
    source: Source
    frame: int = 0
    track_id: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"detection confidence {self.confidence} outside [0, 1]")
        self.source = Source(self.source)
