"""Two-criterion detection evaluation for anonymization pipelines.

IoU alone misjudges anonymization: a detection that swallows the whole face
plus some background protects identity, a detection clipping half the face
does not, yet both can score the same IoU. Ground truth therefore carries two
boxes per person (face and head) and a detection is judged by two ratios:

* face criterion: intersection(D, F) / area(F) > alpha
  (enough of the face gets anonymized)
* head criterion: intersection(D, H) / area(D) > beta
  (the detection does not waste pixels on background)

Detections are matched to head labels one-to-one with the assignment solver,
gated on IoU > 0, and classified per label: Both / Face / Head / None for
labels with a face, Head / None for head-only labels. Unmatched detections,
and matched ones failing every applicable criterion, count as false positives.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .assignment import FORBIDDEN, solve_assignment
from .geometry import BBox, Detection, Source, containment_ratio, intersect_area, iou


class LabelValidationError(ValueError):
    """A labeled frame violates the labeling protocol."""


@dataclass
class EvalConfig:
    alpha: float = 0.5
    beta: float = 0.5
    size_filter: float | None = None  # min max_dim for head labels + head detections

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0 or not 0.0 < self.beta < 1.0:
            raise ValueError("alpha and beta must lie in (0, 1)")


@dataclass
class LabeledFrame:
    """Ground truth for one frame: face boxes, head boxes, and their pairing.

    face_to_head maps each face label index to exactly one head label index;
    when None the pairing is derived by maximum containment.
    """

    frame: int
    face_labels: list[BBox] = field(default_factory=list)
    head_labels: list[BBox] = field(default_factory=list)
    face_to_head: dict[int, int] | None = None


@dataclass
class EvalReport:
    """Category counts plus false positives, in the two-label layout."""

    both: int = 0
    face_only: int = 0
    head_only_of_pair: int = 0
    none_of_pair: int = 0
    head_match: int = 0
    head_none: int = 0
    fp_count: int = 0
    throughput: float = 0.0  # frames per second of the producing run

    def add(self, other: "EvalReport") -> None:
        self.both += other.both
        self.face_only += other.face_only
        self.head_only_of_pair += other.head_only_of_pair
        self.none_of_pair += other.none_of_pair
        self.head_match += other.head_match
        self.head_none += other.head_none
        self.fp_count += other.fp_count

    def counts(self) -> dict[str, int]:
        return {
            "both": self.both,
            "face_only": self.face_only,
            "head_only_of_pair": self.head_only_of_pair,
            "none_of_pair": self.none_of_pair,
            "head_match": self.head_match,
            "head_none": self.head_none,
            "fp_count": self.fp_count,
        }

    def table(self, name: str = "detections") -> str:
        """Aligned plain-text table: pair categories, head-only categories, FP, FPS."""
        header = (f"{'Match':<16}|{'Both':>6}{'Face':>6}{'Head':>6}{'None':>6} "
                  f"|{'Head':>6}{'None':>6} |{'FP':>7} |{'FPS':>8}")
        row = (f"{name:<16}|{self.both:>6}{self.face_only:>6}"
               f"{self.head_only_of_pair:>6}{self.none_of_pair:>6} "
               f"|{self.head_match:>6}{self.head_none:>6} "
               f"|{self.fp_count:>7} |{self.throughput:>8.1f}")
        rule = "-" * len(header)
        return "\n".join([header, rule, row])


def face_criterion(d: BBox, f: BBox, alpha: float) -> bool:
    """Strictly more than an alpha fraction of the face label is inside d."""
    if f.area <= 0:
        raise ValueError("face criterion: zero-area face label")
    return intersect_area(d, f) / f.area > alpha


def head_criterion(d: BBox, h: BBox, beta: float) -> bool:
    """Strictly more than a beta fraction of the detection lies on the head label."""
    if d.area <= 0:
        raise ValueError("head criterion: zero-area detection")
    return intersect_area(d, h) / d.area > beta


def associate_labels(faces: list[BBox], heads: list[BBox],
                     frame: int | None = None) -> dict[int, int]:
    """Pair each face label with the head label containing most of it.

    Raises LabelValidationError when a face overlaps no head at all, or when
    two faces land on the same head (one face per head by protocol).
    """
    where = f"frame {frame}: " if frame is not None else ""
    mapping: dict[int, int] = {}
    for j, face in enumerate(faces):
        if face.area <= 0:
            raise LabelValidationError(f"{where}face label {j} has zero area")
        best_i, best_ratio = None, 0.0
        for i, head in enumerate(heads):
            ratio = containment_ratio(face, head)
            if ratio > best_ratio:
                best_i, best_ratio = i, ratio
        if best_i is None:
            raise LabelValidationError(
                f"{where}face label {j} {face} lies outside every head label"
            )
        mapping[j] = best_i
    used = list(mapping.values())
    if len(set(used)) != len(used):
        raise LabelValidationError(f"{where}two face labels map to the same head label")
    return mapping


def _resolve_mapping(labels: LabeledFrame) -> dict[int, int]:
    """Validated face->head pairing; explicit links win over containment."""
    where = f"frame {labels.frame}: "
    for i, head in enumerate(labels.head_labels):
        if head.area <= 0:
            raise LabelValidationError(f"{where}head label {i} has zero area")
    for j, face in enumerate(labels.face_labels):
        if face.area <= 0:
            raise LabelValidationError(f"{where}face label {j} has zero area")
    if labels.face_to_head is None:
        return associate_labels(labels.face_labels, labels.head_labels, labels.frame)

    mapping = dict(labels.face_to_head)
    for j, i in mapping.items():
        if not 0 <= j < len(labels.face_labels) or not 0 <= i < len(labels.head_labels):
            raise LabelValidationError(f"{where}link ({j}, {i}) out of range")
    if len(mapping) != len(labels.face_labels):
        # Unlinked faces fall back to containment against unclaimed heads.
        claimed = set(mapping.values())
        free_faces = [j for j in range(len(labels.face_labels)) if j not in mapping]
        free_heads = [i for i in range(len(labels.head_labels)) if i not in claimed]
        sub = associate_labels([labels.face_labels[j] for j in free_faces],
                               [labels.head_labels[i] for i in free_heads],
                               labels.frame)
        for jj, ii in sub.items():
            mapping[free_faces[jj]] = free_heads[ii]
    used = list(mapping.values())
    if len(set(used)) != len(used):
        raise LabelValidationError(f"{where}two face labels link to the same head label")
    return mapping


def _apply_size_filter(dets: list[Detection], labels: LabeledFrame,
                       mapping: dict[int, int],
                       min_dim: float) -> tuple[list[Detection], list[BBox], dict[int, int | None]]:
    """Drop small head labels (and their faces) and small head-source detections.

    Returns (kept detections, kept head labels, kept-head index -> face index).
    """
    keep_heads = [i for i, h in enumerate(labels.head_labels) if h.max_dim >= min_dim]
    remap = {old: new for new, old in enumerate(keep_heads)}
    head_boxes = [labels.head_labels[i] for i in keep_heads]
    head_face: dict[int, int | None] = {remap[i]: None for i in keep_heads}
    for j, i in mapping.items():
        if i in remap:
            head_face[remap[i]] = j
    kept_dets = [
        d for d in dets
        if d.source is not Source.HEAD or d.bbox.max_dim >= min_dim
    ]
    return kept_dets, head_boxes, head_face


def _match_dets_to_heads(dets: list[Detection],
                         heads: list[BBox]) -> dict[int, int]:
    """Hungarian matching on 1 - IoU, infeasible when the boxes do not overlap.

    Returns head index -> detection index.
    """
    costs = np.full((len(dets), len(heads)), FORBIDDEN)
    for di, det in enumerate(dets):
        for hi, head in enumerate(heads):
            overlap = iou(det.bbox, head)
            if overlap > 0:
                costs[di, hi] = 1.0 - overlap
    return {hi: di for di, hi in solve_assignment(costs)}


def evaluate_frame(dets: list[Detection], labels: LabeledFrame,
                   cfg: EvalConfig | None = None) -> EvalReport:
    """Classify one frame's detections against its labels."""
    if cfg is None:
        cfg = EvalConfig()
    mapping = _resolve_mapping(labels)

    if cfg.size_filter is not None:
        dets, head_boxes, head_face = _apply_size_filter(
            dets, labels, mapping, cfg.size_filter)
    else:
        head_boxes = list(labels.head_labels)
        head_face = {i: None for i in range(len(head_boxes))}
        for j, i in mapping.items():
            head_face[i] = j

    matched = _match_dets_to_heads(dets, head_boxes)

    report = EvalReport()
    fp_dets = set(range(len(dets))) - set(matched.values())
    for hi, head in enumerate(head_boxes):
        di = matched.get(hi)
        face_idx = head_face[hi]
        if face_idx is not None:
            face = labels.face_labels[face_idx]
            ok_face = di is not None and face_criterion(dets[di].bbox, face, cfg.alpha)
            ok_head = di is not None and head_criterion(dets[di].bbox, head, cfg.beta)
            if ok_face and ok_head:
                report.both += 1
            elif ok_face:
                report.face_only += 1
            elif ok_head:
                report.head_only_of_pair += 1
            else:
                report.none_of_pair += 1
                if di is not None:
                    fp_dets.add(di)  # matched but satisfies nothing
        else:
            if di is not None and head_criterion(dets[di].bbox, head, cfg.beta):
                report.head_match += 1
            else:
                report.head_none += 1
                if di is not None:
                    fp_dets.add(di)
    report.fp_count = len(fp_dets)
    return report


def _check_frames_aligned(dets_by_frame: dict[int, list[Detection]],
                          labels_by_frame: dict[int, LabeledFrame]) -> list[int]:
    det_frames, label_frames = set(dets_by_frame), set(labels_by_frame)
    if det_frames != label_frames:
        missing = sorted(label_frames - det_frames)
        extra = sorted(det_frames - label_frames)
        raise ValueError(
            f"detection/label frame mismatch: missing detections for {missing}, "
            f"detections without labels for {extra}"
        )
    return sorted(det_frames)


def evaluate_sequence(dets_by_frame: dict[int, list[Detection]],
                      labels_by_frame: dict[int, LabeledFrame],
                      cfg: EvalConfig | None = None) -> EvalReport:
    """Sum evaluate_frame over a sequence; frame sets must match exactly."""
    frames = _check_frames_aligned(dets_by_frame, labels_by_frame)
    total = EvalReport()
    start = time.perf_counter()
    for f in frames:
        total.add(evaluate_frame(dets_by_frame[f], labels_by_frame[f], cfg))
    elapsed = time.perf_counter() - start
    total.throughput = len(frames) / elapsed if elapsed > 0 else 0.0
    return total


def missing_rate_curve(dets_by_frame: dict[int, list[Detection]],
                       labels_by_frame: dict[int, LabeledFrame],
                       cfg: EvalConfig | None = None,
                       thresholds: list[float] | None = None) -> dict[float, float | None]:
    """Percent of face labels missed, sweeping a head-size floor.

    At each threshold only faces whose paired head label has max_dim at least
    the threshold count; a face is missed when no detection in its frame
    satisfies the face criterion against it. Thresholds with no qualifying
    faces report None.
    """
    if cfg is None:
        cfg = EvalConfig()
    if thresholds is None:
        thresholds = [0.0]
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be ascending")
    frames = _check_frames_aligned(dets_by_frame, labels_by_frame)

    # (paired head size, covered) per face label, computed once.
    sized: list[tuple[float, bool]] = []
    for f in frames:
        labels = labels_by_frame[f]
        mapping = _resolve_mapping(labels)
        dets = dets_by_frame[f]
        for j, i in mapping.items():
            face = labels.face_labels[j]
            covered = any(face_criterion(d.bbox, face, cfg.alpha) for d in dets)
            sized.append((labels.head_labels[i].max_dim, covered))

    curve: dict[float, float | None] = {}
    for t in thresholds:
        eligible = [covered for dim, covered in sized if dim >= t]
        if not eligible:
            curve[t] = None
        else:
            missed = sum(1 for covered in eligible if not covered)
            curve[t] = 100.0 * missed / len(eligible)
    return curve


def threshold_sweep(dets_by_frame: dict[int, list[Detection]],
                    labels_by_frame: dict[int, LabeledFrame],
                    which: str,
                    values: list[float],
                    size_filter: float | None = None) -> list[dict[str, float]]:
    """Re-classify face-bearing labels while one criterion threshold sweeps.

    `which` is "alpha" or "beta"; the other threshold stays at 0.5. Matching
    is IoU-based and does not depend on the thresholds, so it is computed
    once. Returns rows of {value, both, face, head, none}.
    """
    if which not in ("alpha", "beta"):
        raise ValueError('sweep variable must be "alpha" or "beta"')
    if any(not 0.0 < v < 1.0 for v in values):
        raise ValueError("sweep values must lie in (0, 1)")
    frames = _check_frames_aligned(dets_by_frame, labels_by_frame)

    # Criterion ratios of each (matched detection, face-bearing label) pair.
    pairs: list[tuple[float, float] | None] = []
    for f in frames:
        labels = labels_by_frame[f]
        mapping = _resolve_mapping(labels)
        dets = dets_by_frame[f]
        if size_filter is not None:
            dets, head_boxes, head_face = _apply_size_filter(
                dets, labels, mapping, size_filter)
        else:
            head_boxes = list(labels.head_labels)
            head_face = {i: None for i in range(len(head_boxes))}
            for j, i in mapping.items():
                head_face[i] = j
        matched = _match_dets_to_heads(dets, head_boxes)
        for hi, head in enumerate(head_boxes):
            face_idx = head_face[hi]
            if face_idx is None:
                continue
            di = matched.get(hi)
            if di is None:
                pairs.append(None)
            else:
                face = labels.face_labels[face_idx]
                d = dets[di].bbox
                pairs.append((intersect_area(d, face) / face.area,
                              intersect_area(d, head) / d.area))

    rows = []
    for v in values:
        alpha, beta = (v, 0.5) if which == "alpha" else (0.5, v)
        both = face = head = none = 0
        for pair in pairs:
            if pair is None:
                none += 1
                continue
            ok_face = pair[0] > alpha
            ok_head = pair[1] > beta
            if ok_face and ok_head:
                both += 1
            elif ok_face:
                face += 1
            elif ok_head:
                head += 1
            else:
                none += 1
        rows.append({"value": v, "both": both, "face": face, "head": head, "none": none})
    return rows
