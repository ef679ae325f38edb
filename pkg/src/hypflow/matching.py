"""Minimum-weight perfect matching for comparing eigenvalue multisets.

Eigenvalue multisets have no canonical order, so equality and distance
questions are answered by finding the permutation that minimizes the total
pairwise distance. The Hungarian algorithm (potentials + augmenting paths,
O(n^3)) is plenty at the matrix sizes this package targets.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch

_INF = float("inf")


def min_weight_assignment(cost) -> tuple[list[int], float]:
    """Solve the square assignment problem for a cost matrix.

    Returns (assignment, total) where assignment[i] is the column matched to
    row i and total is the summed cost of the matching.
    """
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionMismatch(f"cost matrix must be square, got {c.shape}")
    n = c.shape[0]
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [_INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = _INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = c[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assignment = [0] * n
    for j in range(1, n + 1):
        if p[j] > 0:
            assignment[p[j] - 1] = j - 1
    total = float(sum(c[i][assignment[i]] for i in range(n)))
    return assignment, total


def pair_values(a, b) -> tuple[list[int], float]:
    """Optimally pair two equal-length complex value lists.

    Returns (perm, max_distance): perm[i] is the index in ``b`` matched to
    ``a[i]`` and max_distance is the largest matched modulus distance.
    """
    av = np.atleast_1d(np.asarray(a, dtype=complex))
    bv = np.atleast_1d(np.asarray(b, dtype=complex))
    if av.shape != bv.shape:
        raise DimensionMismatch(
            f"cannot pair {len(av)} values with {len(bv)} values"
        )
    cost = np.abs(av[:, None] - bv[None, :])
    perm, _ = min_weight_assignment(cost)
    max_dist = float(max(cost[i][perm[i]] for i in range(len(av))))
    return perm, max_dist


def matched_distance(a, b) -> float:
    """Largest pairwise distance under the optimal matching of two multisets."""
    _, dist = pair_values(a, b)
    return dist
