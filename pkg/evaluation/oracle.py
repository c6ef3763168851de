"""
Exact Max-Cut Oracle
Exhaustive enumeration for small graphs (tests and the `oracle` command)
"""

from typing import Tuple

import numpy as np

from graphs import Graph

ORACLE_MAX_VERTICES = 24


class OracleSizeError(ValueError):
    """Raised when a graph is too large to enumerate."""
    pass


def _check_size(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise OracleSizeError(f"Exact max-cut refused for n={g.n} (cap is {cap})")


def _bits_to_spins(mask: int, n: int) -> np.ndarray:
    """Vertex 0 fixed at +1; bit i-1 of mask set means vertex i is -1."""
    x = np.ones(n, dtype=np.int64)
    for i in range(1, n):
        if (mask >> (i - 1)) & 1:
            x[i] = -1
    return x


def exact_maxcut(g: Graph, cap: int = ORACLE_MAX_VERTICES) -> Tuple[float, np.ndarray]:
    """
    Optimal cut by enumerating the 2^(n-1) configurations with x_0 = +1.

    Configurations are scanned in chunks with vectorized cut evaluation.
    Ties go to the lexicographically smallest configuration, reading -1 < +1.

    Returns:
        (optimal value, one optimal spin vector)
    """
    _check_size(g, cap)
    if g.n <= 1 or not g.edges:
        return 0, np.ones(g.n, dtype=np.int64)

    e = g.edge_array()
    w = g.weight_array()
    unit = g.weights is None
    total = 1 << (g.n - 1)
    chunk = 1 << 16

    # side[v] is the bit of vertex v (1 = -1 spin); vertex 0 is always 0
    shifts = np.arange(g.n - 1, dtype=np.int64)
    best_value = -1.0
    best_x = None

    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = np.zeros((masks.size, g.n), dtype=np.int8)
        bits[:, 1:] = (masks[:, None] >> shifts[None, :]) & 1
        crossing = bits[:, e[:, 0]] != bits[:, e[:, 1]]
        values = crossing @ w

        top = values.max()
        if top < best_value:
            continue
        candidates = np.flatnonzero(values == top)
        spins = 1 - 2 * bits[candidates].astype(np.int64)
        # lexsort keys: last key is primary, so reverse the column order
        first = candidates[np.lexsort(spins.T[::-1])[0]]
        x = 1 - 2 * bits[first].astype(np.int64)
        if top > best_value or tuple(x) < tuple(best_x):
            best_value = float(top)
            best_x = x

    return (int(round(best_value)) if unit else best_value), best_x


def exact_maxcut_gray(g: Graph, cap: int = ORACLE_MAX_VERTICES) -> float:
    """
    Optimal cut value by a Gray-code walk: each step flips one vertex and
    updates the cut incrementally. Independent of exact_maxcut; value only.
    """
    _check_size(g, cap)
    if g.n <= 1 or not g.edges:
        return 0

    n = g.n
    adjacency = [[] for _ in range(n)]
    for (i, j), w in zip(g.edges, g.weight_array().tolist()):
        adjacency[i].append((j, w))
        adjacency[j].append((i, w))

    x = [1] * n
    current = 0.0
    best = 0.0
    for step in range(1, 1 << (n - 1)):
        # lowest set bit of step picks the vertex (1..n-1) to flip
        v = (step & -step).bit_length()
        delta = 0.0
        for u, w in adjacency[v]:
            delta += w if x[u] == x[v] else -w
        x[v] = -x[v]
        current += delta
        if current > best:
            best = current

    return int(round(best)) if g.weights is None else best
