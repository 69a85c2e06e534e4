"""Shared test utilities: independent oracles and small builders."""

from functools import lru_cache

import numpy as np

from headbox.geometry import BBox, Detection, Pose, Source


def brute_force_assignment(costs: np.ndarray) -> tuple[int, float]:
    """Exhaustive best matching: (max cardinality, min total cost among those).

    Enumerates every feasible injective row->col map via depth-first search
    over (row, used-column bitmask) states. Independent of the production
    solver; only usable for small matrices.
    """
    costs = np.asarray(costs, dtype=float)
    if costs.size == 0:
        return 0, 0.0
    n, m = costs.shape

    @lru_cache(maxsize=None)
    def best(i: int, mask: int) -> tuple[int, float]:
        if i == n:
            return 0, 0.0
        best_card, best_cost = best(i + 1, mask)  # leave row i unmatched
        for j in range(m):
            if mask & (1 << j) or not np.isfinite(costs[i, j]):
                continue
            card, cost = best(i + 1, mask | (1 << j))
            card, cost = card + 1, cost + costs[i, j]
            if card > best_card or (card == best_card and cost < best_cost):
                best_card, best_cost = card, cost
        return best_card, best_cost

    return best(0, 0)


def dyadic_costs(rng: np.random.Generator, rows: int, cols: int,
                 forbidden_frac: float = 0.2) -> np.ndarray:
    """Random cost matrix whose finite sums are exact in float64.

    Entries are multiples of 2**-10 with small numerators, so any addition
    order yields bit-identical totals; exact-equality comparisons against
    the brute-force oracle are then meaningful.
    """
    costs = rng.integers(0, 2 ** 20, size=(rows, cols)) / 2.0 ** 10
    mask = rng.uniform(size=(rows, cols)) < forbidden_frac
    costs[mask] = np.inf
    return costs


def pose_with(points: dict[int, tuple[float, float]], confidence: float = 0.9) -> Pose:
    """A pose with the given keypoints present and everything else absent."""
    arr = np.zeros((17, 3))
    for idx, (x, y) in points.items():
        arr[idx] = (x, y, confidence)
    return Pose(arr)


def det(x1: float, y1: float, x2: float, y2: float, conf: float = 0.9,
        source: Source = Source.HEAD, frame: int = 0) -> Detection:
    return Detection(bbox=BBox(x1, y1, x2, y2), confidence=conf,
                     source=source, frame=frame)


def coverage_mask(boxes: list[BBox], size: int = 128) -> np.ndarray:
    """Rasterized union of integer-coordinate boxes on a size x size canvas."""
    mask = np.zeros((size, size), dtype=bool)
    for b in boxes:
        x0, y0 = max(int(b.x_min), 0), max(int(b.y_min), 0)
        x1, y1 = min(int(b.x_max), size), min(int(b.y_max), size)
        if x0 < x1 and y0 < y1:
            mask[y0:y1, x0:x1] = True
    return mask


def random_int_box(rng: np.random.Generator, size: int = 128,
                   max_extent: int = 60) -> BBox:
    x0 = int(rng.integers(0, size - 2))
    y0 = int(rng.integers(0, size - 2))
    w = int(rng.integers(1, max_extent))
    h = int(rng.integers(1, max_extent))
    return BBox(x0, y0, min(x0 + w, size), min(y0 + h, size))
