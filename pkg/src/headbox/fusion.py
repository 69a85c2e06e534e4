"""Per-frame fusion of head detections with face detections.

Four strategies: keep everything, prefer heads, prefer faces, or arbitrate
by confidence. "A face is within a head" is one containment predicate with
a single threshold gamma shared by every strategy.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from .geometry import Detection, containment_ratio

logger = logging.getLogger(__name__)


class FusionStrategy(str, Enum):
    KEEP_BOTH = "keep-both"
    KEEP_HEAD = "keep-head"
    KEEP_FACE = "keep-face"
    BY_CONFIDENCE = "by-confidence"


@dataclass
class FusionConfig:
    strategy: FusionStrategy = FusionStrategy.BY_CONFIDENCE
    gamma: float = 0.9

    def __post_init__(self):
        self.strategy = FusionStrategy(self.strategy)
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")


def face_within_head(face: Detection, head: Detection, gamma: float) -> bool:
    """True when at least a gamma fraction of the face box lies inside the head box."""
    if face.bbox.area <= 0:
        logger.warning("zero-area face box %s treated as not-within", face.bbox)
        return False
    return containment_ratio(face.bbox, head.bbox) >= gamma


def _group_faces_by_head(heads: list[Detection], faces: list[Detection],
                         gamma: float) -> tuple[dict[int, list[int]], list[int]]:
    """Assign each face to at most one containing head.

    A face within several heads goes to the head with the highest containment
    ratio; ties break toward the earlier head in input order. Returns
    (head index -> face indices, ungrouped face indices).
    """
    groups: dict[int, list[int]] = {i: [] for i in range(len(heads))}
    free: list[int] = []
    for j, face in enumerate(faces):
        best_i, best_ratio = None, 0.0
        for i, head in enumerate(heads):
            if not face_within_head(face, head, gamma):
                continue
            ratio = containment_ratio(face.bbox, head.bbox)
            if best_i is None or ratio > best_ratio:
                best_i, best_ratio = i, ratio
        if best_i is None:
            free.append(j)
        else:
            groups[best_i].append(j)
    return groups, free


def fuse(heads: list[Detection], faces: list[Detection],
         cfg: FusionConfig | None = None) -> list[Detection]:
    """Fuse one frame's head and face detections into a final set.

    Every output box is one of the input boxes; no coordinates are edited.
    """
    if cfg is None:
        cfg = FusionConfig()
    strategy = cfg.strategy

    if strategy is FusionStrategy.KEEP_BOTH:
        return list(heads) + list(faces)

    if strategy is FusionStrategy.KEEP_HEAD:
        kept_faces = [
            f for f in faces
            if not any(face_within_head(f, h, cfg.gamma) for h in heads)
        ]
        return list(heads) + kept_faces

    if strategy is FusionStrategy.KEEP_FACE:
        kept_heads = [
            h for h in heads
            if not any(face_within_head(f, h, cfg.gamma) for f in faces)
        ]
        return kept_heads + list(faces)

    # By confidence: arbitrate each head against the faces grouped inside it.
    groups, free = _group_faces_by_head(heads, faces, cfg.gamma)
    out: list[Detection] = []
    for i, head in enumerate(heads):
        members = groups[i]
        if not members:
            out.append(head)
        elif head.confidence >= max(faces[j].confidence for j in members):
            # Tie keeps the head: it covers more area, and a missed face
            # costs more than an extra anonymized patch.
            out.append(head)
        else:
            out.extend(faces[j] for j in members)
    out.extend(faces[j] for j in free)
    return out


def fuse_frames(heads_by_frame: dict[int, list[Detection]],
                faces_by_frame: dict[int, list[Detection]],
                cfg: FusionConfig | None = None) -> dict[int, list[Detection]]:
    """Fuse two per-frame detection maps; missing frames count as empty."""
    frames = sorted(set(heads_by_frame) | set(faces_by_frame))
    return {
        f: fuse(heads_by_frame.get(f, []), faces_by_frame.get(f, []), cfg)
        for f in frames
    }
