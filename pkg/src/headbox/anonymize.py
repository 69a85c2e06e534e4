"""Irreversible pixel anonymization of detection regions.

Boxes are inflated by a margin, clamped to the image, and their pixels
replaced by a Gaussian-blurred or pixelated version. Everything outside the
boxes stays bit-identical. Blur strength scales with box size so large faces
are not under-blurred.
"""

from __future__ import annotations

import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from .geometry import BBox, Detection

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


class AnonymizeMethod(str, Enum):
    GAUSSIAN_BLUR = "gaussian-blur"
    PIXELATE = "pixelate"


@dataclass
class AnonymizeConfig:
    method: AnonymizeMethod = AnonymizeMethod.GAUSSIAN_BLUR
    blur_sigma_ratio: float = 0.15   # sigma as a fraction of box max_dim
    pixel_blocks: int = 8            # blocks along the box's larger side
    margin_ratio: float = 0.1        # box inflation before anonymizing

    def __post_init__(self):
        self.method = AnonymizeMethod(self.method)
        if self.blur_sigma_ratio <= 0 or self.margin_ratio <= 0:
            raise ValueError("ratios must be positive")
        if self.pixel_blocks < 2:
            raise ValueError("pixel_blocks must be >= 2")


def _pixel_window(box: BBox, width: int, height: int) -> tuple[int, int, int, int] | None:
    """Rasterize a continuous box to a clamped integer window, or None if empty."""
    x0 = max(int(math.floor(box.x_min)), 0)
    y0 = max(int(math.floor(box.y_min)), 0)
    x1 = min(int(math.ceil(box.x_max)), width)
    y1 = min(int(math.ceil(box.y_max)), height)
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, y0, x1, y1


def _blur_region(region: np.ndarray, sigma: float) -> np.ndarray:
    blurred = np.empty_like(region, dtype=float)
    for c in range(region.shape[2]):
        blurred[:, :, c] = gaussian_filter(region[:, :, c].astype(float), sigma=sigma)
    return np.clip(np.rint(blurred), 0, 255).astype(region.dtype)


def _pixelate_region(region: np.ndarray, blocks: int) -> np.ndarray:
    h, w = region.shape[:2]
    block = max(1, math.ceil(max(h, w) / blocks))
    out = region.copy()
    for y in range(0, h, block):
        for x in range(0, w, block):
            cell = region[y:y + block, x:x + block]
            mean = np.rint(cell.reshape(-1, region.shape[2]).mean(axis=0))
            out[y:y + block, x:x + block] = mean.astype(region.dtype)
    return out


def anonymize_frame(image: np.ndarray, dets: list[Detection],
                    cfg: AnonymizeConfig | None = None) -> np.ndarray:
    """Return a copy of `image` with every detection region anonymized.

    `image` is an (H, W, 3) uint8 RGB array. Boxes fully outside the image
    are skipped with a warning.
    """
    if cfg is None:
        cfg = AnonymizeConfig()
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3 or image.size == 0:
        raise ValueError(f"expected a non-empty (H, W, 3) image, got shape {image.shape}")

    height, width = image.shape[:2]
    out = image.copy()
    for det in dets:
        inflated = det.bbox.inflated(cfg.margin_ratio)
        window = _pixel_window(inflated, width, height)
        if window is None:
            logger.warning("frame %d: box %s outside image, skipped", det.frame, det.bbox)
            continue
        x0, y0, x1, y1 = window
        region = out[y0:y1, x0:x1]
        if cfg.method is AnonymizeMethod.GAUSSIAN_BLUR:
            sigma = cfg.blur_sigma_ratio * inflated.max_dim
            out[y0:y1, x0:x1] = _blur_region(region, sigma)
        else:
            out[y0:y1, x0:x1] = _pixelate_region(region, cfg.pixel_blocks)
    return out


# -- batch image plumbing -------------------------------------------------

def _frame_index(path: Path, position: int) -> int:
    """Frame index from the trailing integer in the stem, else list position."""
    match = re.search(r"(\d+)$", path.stem)
    return int(match.group(1)) if match else position


def list_frame_images(images: str | Path) -> list[tuple[int, Path]]:
    """Resolve a directory or glob pattern to sorted (frame, path) pairs."""
    images = Path(images)
    if images.is_dir():
        files = sorted(p for p in images.iterdir()
                       if p.suffix.lower() in IMAGE_SUFFIXES)
    else:
        files = sorted(images.parent.glob(images.name))
    if not files:
        raise FileNotFoundError(f"no images found under {images}")
    return [(_frame_index(p, i), p) for i, p in enumerate(files)]


def load_image(path: str | Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except Exception as exc:
        raise ValueError(f"unreadable image {path}: {exc}") from exc


def save_image(array: np.ndarray, path: str | Path) -> None:
    Image.fromarray(array).save(path)


def anonymize_directory(images: str | Path,
                        dets_by_frame: dict[int, list[Detection]],
                        outdir: str | Path,
                        cfg: AnonymizeConfig | None = None,
                        jobs: int = 1) -> list[Path]:
    """Anonymize every frame image and write it under `outdir`.

    Frames without detections pass through untouched (re-encoded). Returns
    the written paths in frame order.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    entries = list_frame_images(images)

    def process(entry: tuple[int, Path]) -> Path:
        frame, path = entry
        result = anonymize_frame(load_image(path), dets_by_frame.get(frame, []), cfg)
        target = outdir / path.name
        save_image(result, target)
        return target

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(process, entries))
    return [process(entry) for entry in entries]
