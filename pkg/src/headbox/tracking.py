"""Multi-object tracking of head/face detections.

A constant-velocity Kalman filter over (cx, cy, w, h) with center-distance
association: small faces often have zero box overlap between adjacent frames,
so IoU gating falls apart while plain l2 distance between centers keeps the
track alive. Lifecycle follows the usual detect-to-track pattern: tracks
spawn from unmatched detections, coast unmatched for up to max_age frames,
and are reported only after min_hits consecutive updates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import FORBIDDEN, solve_assignment
from .geometry import BBox, Detection, Source, center_distance

_DIM = 8  # (cx, cy, w, h, vcx, vcy, vw, vh)

# One-frame constant-velocity transition and position/size observation.
_F = np.eye(_DIM)
_F[:4, 4:] = np.eye(4)
_H = np.hstack([np.eye(4), np.zeros((4, 4))])

_INIT_VELOCITY_VAR = 1e4  # wide prior, velocities start unknown


@dataclass
class TrackerConfig:
    max_age: int = 3
    min_hits: int = 2
    gate_dist: float = 100.0
    process_noise: float = 1.0
    measurement_noise: float = 1.0

    def __post_init__(self):
        if self.max_age < 1 or self.min_hits < 1:
            raise ValueError("max_age and min_hits must be >= 1")
        if self.gate_dist <= 0:
            raise ValueError("gate_dist must be positive")
        if self.process_noise <= 0 or self.measurement_noise <= 0:
            raise ValueError("noise variances must be positive")


def _bbox_to_z(bbox: BBox) -> np.ndarray:
    cx, cy = bbox.center
    return np.array([cx, cy, bbox.width, bbox.height])


def _z_to_bbox(z: np.ndarray) -> BBox:
    cx, cy, w, h = z[:4]
    w = max(float(w), 1e-9)  # emitted boxes must keep positive extent
    h = max(float(h), 1e-9)
    return BBox(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2)


@dataclass
class Track:
    """Kalman state plus lifecycle counters for one tracked object."""

    id: int
    state: np.ndarray
    covariance: np.ndarray
    hits: int = 1
    hit_streak: int = 1
    age: int = 0
    time_since_update: int = 0
    confidence: float = 0.0
    source_counts: dict = field(default_factory=dict)
    last_source: Source = Source.HEAD

    @classmethod
    def from_detection(cls, det: Detection, track_id: int, cfg: TrackerConfig) -> "Track":
        state = np.zeros(_DIM)
        state[:4] = _bbox_to_z(det.bbox)
        cov = np.diag([10.0 * cfg.measurement_noise] * 4 + [_INIT_VELOCITY_VAR] * 4)
        track = cls(id=track_id, state=state, covariance=cov,
                    confidence=det.confidence, last_source=det.source)
        track.source_counts[det.source] = 1
        return track

    @property
    def bbox(self) -> BBox:
        return _z_to_bbox(self.state)

    @property
    def source(self) -> Source:
        """Dominant detection source; ties go to the most recent one."""
        best = self.last_source
        best_count = self.source_counts.get(best, 0)
        for src, count in self.source_counts.items():
            if count > best_count:
                best, best_count = src, count
        return best


def predict(track: Track, cfg: TrackerConfig) -> Track:
    """Advance one frame under constant velocity, inflating the covariance."""
    q = cfg.process_noise * np.diag([1.0] * 4 + [0.01] * 4)
    track.state = _F @ track.state
    track.covariance = _F @ track.covariance @ _F.T + q
    if track.time_since_update > 0:
        track.hit_streak = 0
    track.time_since_update += 1
    track.age += 1
    return track


def update(track: Track, det: Detection, cfg: TrackerConfig) -> Track:
    """Fold a matched detection into the track (Joseph-form covariance update)."""
    r = cfg.measurement_noise * np.eye(4)
    z = _bbox_to_z(det.bbox)
    p = track.covariance
    innovation = z - _H @ track.state
    s = _H @ p @ _H.T + r
    gain = p @ _H.T @ np.linalg.inv(s)
    track.state = track.state + gain @ innovation
    ikh = np.eye(_DIM) - gain @ _H
    track.covariance = ikh @ p @ ikh.T + gain @ r @ gain.T
    track.time_since_update = 0
    track.hits += 1
    track.hit_streak += 1
    track.confidence = det.confidence
    track.source_counts[det.source] = track.source_counts.get(det.source, 0) + 1
    track.last_source = det.source
    return track


def associate(tracks: list[Track], detections: list[Detection],
              cfg: TrackerConfig) -> tuple[list[tuple[int, int]], list[int], list[int]]:
    """Match predicted track boxes to detections by center distance.

    Pairs beyond gate_dist are infeasible. Returns (matched (track, det)
    index pairs, unmatched track indices, unmatched detection indices).
    """
    costs = np.full((len(tracks), len(detections)), FORBIDDEN)
    for i, track in enumerate(tracks):
        for j, det in enumerate(detections):
            dist = center_distance(track.bbox, det.bbox)
            if dist <= cfg.gate_dist:
                costs[i, j] = dist
    matches = solve_assignment(costs)
    matched_tracks = {i for i, _ in matches}
    matched_dets = {j for _, j in matches}
    unmatched_tracks = [i for i in range(len(tracks)) if i not in matched_tracks]
    unmatched_dets = [j for j in range(len(detections)) if j not in matched_dets]
    return matches, unmatched_tracks, unmatched_dets


class Tracker:
    """Sequential per-sequence tracker; frames must arrive in increasing order."""

    def __init__(self, cfg: TrackerConfig | None = None):
        self.cfg = cfg or TrackerConfig()
        self.tracks: list[Track] = []
        self._next_id = 1
        self._last_frame: int | None = None

    def step(self, frame: int, detections: list[Detection]) -> list[Detection]:
        """Advance one frame and return the boxes of confirmed tracks.

        Only tracks updated this frame with a hit streak of at least
        min_hits are emitted; emitted detections carry their track id.
        """
        if self._last_frame is not None and frame <= self._last_frame:
            raise ValueError(
                f"frames must be strictly increasing: got {frame} after {self._last_frame}"
            )
        self._last_frame = frame

        for track in self.tracks:
            predict(track, self.cfg)

        matches, _, unmatched_dets = associate(self.tracks, detections, self.cfg)
        for ti, dj in matches:
            update(self.tracks[ti], detections[dj], self.cfg)
        for dj in unmatched_dets:
            self.tracks.append(Track.from_detection(detections[dj], self._next_id, self.cfg))
            self._next_id += 1

        self.tracks = [t for t in self.tracks if t.time_since_update <= self.cfg.max_age]

        emitted = []
        for track in self.tracks:
            if track.time_since_update == 0 and track.hit_streak >= self.cfg.min_hits:
                emitted.append(Detection(
                    bbox=track.bbox,
                    confidence=track.confidence,
                    source=track.source,
                    frame=frame,
                    track_id=track.id,
                ))
        return emitted


def track_frames(dets_by_frame: dict[int, list[Detection]],
                 cfg: TrackerConfig | None = None) -> dict[int, list[Detection]]:
    """Run a fresh tracker over a per-frame detection map (sorted by frame)."""
    tracker = Tracker(cfg)
    return {f: tracker.step(f, dets_by_frame[f]) for f in sorted(dets_by_frame)}
