"""Interchange file formats: poses, detections and labels.

All three are newline-delimited JSON, one frame record per line, each record
carrying `"schema": 1`. Frames must be unique and ascending. Coordinates are
decimal floats; Python's repr round-trips them exactly, so save(load(x))
preserves every value.

    poses:      {"schema": 1, "frame": 0, "poses": [{"keypoints": [[x, y, c] * 17]}]}
    detections: {"schema": 1, "frame": 0, "boxes": [{"x1", "y1", "x2", "y2",
                 "confidence", "source": "face"|"head", "track_id"?}]}
    labels:     {"schema": 1, "frame": 0, "faces": [[x1, y1, x2, y2], ...],
                 "heads": [...], "links"?: [[face_idx, head_idx], ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

from .evaluation import LabeledFrame
from .geometry import NUM_KEYPOINTS, BBox, Detection, Pose, Source

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """An interchange file violates its schema; message carries frame and field."""


def _fail(path: str, message: str) -> None:
    raise SchemaError(f"{path}: {message}")


def _records(text: str, source_name: str) -> Iterator[tuple[str, dict]]:
    last_frame = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            _fail(f"{source_name}, line {lineno}", f"invalid JSON ({exc})")
        if not isinstance(record, dict):
            _fail(f"{source_name}, line {lineno}", "record must be a JSON object")
        if record.get("schema") != SCHEMA_VERSION:
            _fail(f"{source_name}, line {lineno}",
                  f"schema: expected {SCHEMA_VERSION}, got {record.get('schema')!r}")
        frame = record.get("frame")
        if not isinstance(frame, int) or isinstance(frame, bool):
            _fail(f"{source_name}, line {lineno}", "frame: expected an integer")
        if last_frame is not None and frame <= last_frame:
            if frame == last_frame:
                _fail(f"{source_name}, line {lineno}", f"duplicate frame {frame}")
            _fail(f"{source_name}, line {lineno}",
                  f"frames must be ascending ({frame} after {last_frame})")
        last_frame = frame
        yield f"{source_name}, frame {frame}", record


def _number(value: Any, where: str, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(where, f"{field}: expected a number, got {value!r}")
    return float(value)


def _bbox(obj: Any, where: str, field: str) -> BBox:
    if isinstance(obj, dict):
        coords = [obj.get(k) for k in ("x1", "y1", "x2", "y2")]
    else:
        coords = obj
    if not isinstance(coords, (list, tuple)) or len(coords) != 4 or None in coords:
        _fail(where, f"{field}: expected four coordinates")
    x1, y1, x2, y2 = (_number(v, where, field) for v in coords)
    if x1 > x2 or y1 > y2:
        _fail(where, f"{field}: requires x1 <= x2 and y1 <= y2")
    return BBox(x1, y1, x2, y2)


# -- poses --------------------------------------------------------------

def load_poses(path: str | Path) -> dict[int, list[Pose]]:
    """Load a pose file into {frame: [Pose, ...]}, validating the schema."""
    out: dict[int, list[Pose]] = {}
    for where, record in _records(Path(path).read_text(), str(path)):
        poses = record.get("poses")
        if not isinstance(poses, list):
            _fail(where, "poses: expected a list")
        frame_poses = []
        for pi, pose in enumerate(poses):
            field = f"poses[{pi}].keypoints"
            kps = pose.get("keypoints") if isinstance(pose, dict) else None
            if not isinstance(kps, list) or len(kps) != NUM_KEYPOINTS:
                got = len(kps) if isinstance(kps, list) else kps
                _fail(where, f"{field}: expected {NUM_KEYPOINTS} entries, got {got}")
            triplets = []
            for ki, kp in enumerate(kps):
                if not isinstance(kp, (list, tuple)) or len(kp) != 3:
                    _fail(where, f"{field}[{ki}]: expected [x, y, confidence]")
                x, y, c = (_number(v, where, f"{field}[{ki}]") for v in kp)
                if not 0.0 <= c <= 1.0:
                    _fail(where, f"{field}[{ki}]: confidence {c} outside [0, 1]")
                triplets.append((x, y, c))
            frame_poses.append(Pose(triplets))
        out[record["frame"]] = frame_poses
    return out


def save_poses(poses_by_frame: dict[int, list[Pose]], path: str | Path) -> None:
    lines = []
    for frame in sorted(poses_by_frame):
        record = {
            "schema": SCHEMA_VERSION,
            "frame": frame,
            "poses": [{"keypoints": pose.keypoints.tolist()}
                      for pose in poses_by_frame[frame]],
        }
        lines.append(json.dumps(record))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


# -- detections ---------------------------------------------------------

def load_detections(path: str | Path) -> dict[int, list[Detection]]:
    """Load a detection file into {frame: [Detection, ...]}."""
    out: dict[int, list[Detection]] = {}
    for where, record in _records(Path(path).read_text(), str(path)):
        boxes = record.get("boxes")
        if not isinstance(boxes, list):
            _fail(where, "boxes: expected a list")
        dets = []
        for bi, box in enumerate(boxes):
            field = f"boxes[{bi}]"
            if not isinstance(box, dict):
                _fail(where, f"{field}: expected an object")
            bbox = _bbox(box, where, field)
            conf = _number(box.get("confidence"), where, f"{field}.confidence")
            if not 0.0 <= conf <= 1.0:
                _fail(where, f"{field}.confidence: {conf} outside [0, 1]")
            source = box.get("source")
            if source not in (Source.FACE.value, Source.HEAD.value):
                _fail(where, f'{field}.source: expected "face" or "head", got {source!r}')
            track_id = box.get("track_id")
            if track_id is not None and (isinstance(track_id, bool)
                                         or not isinstance(track_id, int)):
                _fail(where, f"{field}.track_id: expected an integer")
            dets.append(Detection(bbox=bbox, confidence=conf, source=Source(source),
                                  frame=record["frame"], track_id=track_id))
        out[record["frame"]] = dets
    return out


def save_detections(dets_by_frame: dict[int, list[Detection]], path: str | Path) -> None:
    lines = []
    for frame in sorted(dets_by_frame):
        boxes = []
        for det in dets_by_frame[frame]:
            box = {
                "x1": det.bbox.x_min, "y1": det.bbox.y_min,
                "x2": det.bbox.x_max, "y2": det.bbox.y_max,
                "confidence": det.confidence,
                "source": det.source.value,
            }
            if det.track_id is not None:
                box["track_id"] = det.track_id
            boxes.append(box)
        lines.append(json.dumps({"schema": SCHEMA_VERSION, "frame": frame, "boxes": boxes}))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


# -- labels -------------------------------------------------------------

def load_labels(path: str | Path) -> dict[int, LabeledFrame]:
    """Load a label file into {frame: LabeledFrame}."""
    out: dict[int, LabeledFrame] = {}
    for where, record in _records(Path(path).read_text(), str(path)):
        faces, heads = [], []
        for key, target in (("faces", faces), ("heads", heads)):
            entries = record.get(key)
            if not isinstance(entries, list):
                _fail(where, f"{key}: expected a list")
            for bi, box in enumerate(entries):
                target.append(_bbox(box, where, f"{key}[{bi}]"))
        links = record.get("links")
        mapping = None
        if links is not None:
            if not isinstance(links, list):
                _fail(where, "links: expected a list of [face_idx, head_idx] pairs")
            mapping = {}
            for li, link in enumerate(links):
                if (not isinstance(link, (list, tuple)) or len(link) != 2
                        or any(isinstance(v, bool) or not isinstance(v, int) for v in link)):
                    _fail(where, f"links[{li}]: expected [face_idx, head_idx]")
                fi, hi = link
                if not 0 <= fi < len(faces) or not 0 <= hi < len(heads):
                    _fail(where, f"links[{li}]: index out of range")
                if fi in mapping:
                    _fail(where, f"links[{li}]: face {fi} linked more than once")
                mapping[fi] = hi
            if len(set(mapping.values())) != len(mapping):
                _fail(where, "links: a head label may carry at most one face label")
        out[record["frame"]] = LabeledFrame(frame=record["frame"], face_labels=faces,
                                            head_labels=heads, face_to_head=mapping)
    return out


def save_labels(labels_by_frame: dict[int, LabeledFrame], path: str | Path) -> None:
    lines = []
    for frame in sorted(labels_by_frame):
        lf = labels_by_frame[frame]
        record: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "frame": frame,
            "faces": [[b.x_min, b.y_min, b.x_max, b.y_max] for b in lf.face_labels],
            "heads": [[b.x_min, b.y_min, b.x_max, b.y_max] for b in lf.head_labels],
        }
        if lf.face_to_head is not None:
            record["links"] = [[f, h] for f, h in sorted(lf.face_to_head.items())]
        lines.append(json.dumps(record))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
