"""Matrix seriation: agglomerative clustering plus optimal leaf ordering.

Rows (or columns) are clustered by average-linkage agglomerative clustering
on Euclidean distances between their metric vectors; the dendrogram's leaves
are then ordered to minimize the total distance between adjacent leaves,
subject to the dendrogram structure (each internal node may only swap its
two subtrees). The minimization is exact via dynamic programming over
(subtree, leftmost leaf, rightmost leaf) states; ties are broken toward the
lexicographically smallest id sequence.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import pdist, squareform


def cluster_tree(vectors: Sequence[Sequence[float]]):
    """(linkage matrix, condensed distance matrix as a square array)."""
    X = np.asarray(vectors, dtype=float)
    dist = pdist(X, metric="euclidean")
    Z = linkage(dist, method="average")
    return Z, squareform(dist)


def order_cost(order: Sequence[int], D: np.ndarray) -> float:
    return float(sum(D[order[i], order[i + 1]] for i in range(len(order) - 1)))


def leaf_order_from_linkage(Z: np.ndarray, D: np.ndarray, ids: Sequence[str]) -> list[int]:
    """Exact optimal leaf ordering for a given dendrogram and distance matrix."""
    n = D.shape[0]
    children = {}  # internal node -> (left, right)
    for k in range(Z.shape[0]):
        children[n + k] = (int(Z[k, 0]), int(Z[k, 1]))
    root = n + Z.shape[0] - 1

    id_key = list(ids)
    memo: dict[int, dict[tuple[int, int], tuple[float, tuple[int, ...]]]] = {}

    def solve(v: int) -> dict[tuple[int, int], tuple[float, tuple[int, ...]]]:
        if v in memo:
            return memo[v]
        if v < n:
            memo[v] = {(v, v): (0.0, (v,))}
            return memo[v]
        left, right = children[v]
        L, R = solve(left), solve(right)
        table: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {}
        for A, B in ((L, R), (R, L)):
            for (u, m), (cost_a, order_a) in A.items():
                for (k, w), (cost_b, order_b) in B.items():
                    cost = cost_a + float(D[m, k]) + cost_b
                    order = order_a + order_b
                    prev = table.get((u, w))
                    if (
                        prev is None
                        or cost < prev[0] - 1e-12
                        or (
                            abs(cost - prev[0]) <= 1e-12
                            and tuple(id_key[i] for i in order) < tuple(id_key[i] for i in prev[1])
                        )
                    ):
                        table[(u, w)] = (cost, order)
        memo[v] = table
        return table

    table = solve(root)
    best = min(table.values(), key=lambda cv: (cv[0], tuple(id_key[i] for i in cv[1])))
    return list(best[1])


def optimal_leaf_order(vectors: Sequence[Sequence[float]], ids: Sequence[str]) -> list[int]:
    """Permutation of indices of ``vectors`` in optimal-leaf order.

    Degenerate axes (0..2 entries) are ordered by id ascending, since every
    orientation has equal adjacent cost.
    """
    n = len(vectors)
    if n != len(ids):
        raise ValueError("vectors and ids must have equal length")
    if n <= 2:
        return sorted(range(n), key=lambda i: ids[i])
    Z, D = cluster_tree(vectors)
    return leaf_order_from_linkage(Z, D, ids)
