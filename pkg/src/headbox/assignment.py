"""Minimum-cost bipartite matching with infeasible-pair gating.

Semantics: among matchings that use only feasible pairs, maximize the number
of matched pairs first, then minimize total cost. Infeasible pairs are marked
with FORBIDDEN (np.inf) and never appear in the result.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

FORBIDDEN = np.inf


def cost_matrix(rows: int, cols: int) -> np.ndarray:
    """An all-forbidden cost matrix to fill in; feasible costs must be >= 0."""
    return np.full((rows, cols), FORBIDDEN)


def solve_assignment(costs: np.ndarray) -> list[tuple[int, int]]:
    """Solve the gated assignment problem.

    Returns (row, col) pairs sorted by row, covering only feasible entries,
    with maximum cardinality and, among those, minimum total cost. Finite
    costs must be non-negative and small enough that their sum stays well
    below 1e15 (the forbidden sentinel must dominate exactly in float
    arithmetic).
    """
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 2:
        raise ValueError(f"cost matrix must be 2-D, got shape {costs.shape}")
    if costs.size == 0:
        return []

    finite = np.isfinite(costs)
    if not finite.any():
        return []
    if (costs[finite] < 0).any():
        raise ValueError("finite costs must be non-negative")

    # Replace FORBIDDEN with a sentinel larger than any achievable finite
    # total: the solver then maximizes the number of feasible pairs before
    # it minimizes their cost. Selected sentinel pairs are unmatched slots.
    sentinel = float(costs[finite].sum()) + 1.0
    padded = np.where(finite, costs, sentinel)
    rows, cols = linear_sum_assignment(padded)
    return sorted(
        (int(r), int(c)) for r, c in zip(rows, cols) if finite[r, c]
    )


def matching_cost(costs: np.ndarray, pairs: list[tuple[int, int]]) -> float:
    """Total cost of a matching, summed in row order."""
    costs = np.asarray(costs, dtype=float)
    return float(sum(costs[r, c] for r, c in sorted(pairs)))
