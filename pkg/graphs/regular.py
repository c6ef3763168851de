"""
Random Regular Graphs
Immutable d-regular graph type, configuration-model sampler and cut evaluation
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from config import GRAPH_MAX_RESTARTS, GRAPH_REPAIR_MAX_DEGREE, GRAPH_SAMPLER

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphParameterError(ValueError):
    """Raised when (n, d) or an input vector is inconsistent with the graph."""
    pass


class GraphGenerationError(RuntimeError):
    """Raised when the sampler exhausts its restart budget."""
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with unit weights, vertices 0..n-1."""
    n: int
    d: int
    edges: Tuple[Edge, ...]
    seed: Optional[int] = None
    weights: Optional[Tuple[float, ...]] = None
    _neighbors: Tuple[Tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self._neighbors:
            adjacency = [[] for _ in range(self.n)]
            for i, j in self.edges:
                adjacency[i].append(j)
                adjacency[j].append(i)
            object.__setattr__(self, "_neighbors", tuple(tuple(sorted(a)) for a in adjacency))

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Edge], d: Optional[int] = None,
                   seed: Optional[int] = None, weights: Optional[Sequence[float]] = None) -> "Graph":
        """
        Build a graph from an edge list, normalizing pairs to i < j.

        Args:
            n: Vertex count
            edges: Unordered vertex pairs
            d: Nominal degree (defaults to the maximum degree)
            seed: Generation seed, if any
            weights: Optional per-edge weights (oracle tests only)
        """
        normalized = []
        seen = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise GraphParameterError(f"Self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphParameterError(f"Edge ({i}, {j}) out of range for n={n}")
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise GraphParameterError(f"Duplicate edge ({i}, {j})")
            seen.add((i, j))
            normalized.append((i, j))

        if weights is not None and len(weights) != len(normalized):
            raise GraphParameterError("One weight per edge is required")

        degrees = np.zeros(n, dtype=np.int64)
        for i, j in normalized:
            degrees[i] += 1
            degrees[j] += 1
        if d is None:
            d = int(degrees.max()) if n else 0

        return cls(
            n=n,
            d=d,
            edges=tuple(normalized),
            seed=seed,
            weights=tuple(float(w) for w in weights) if weights is not None else None,
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> Tuple[int, ...]:
        return self._neighbors[i]

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._neighbors], dtype=np.int64)

    def is_regular(self) -> bool:
        return bool(np.all(self.degrees() == self.d))

    def edge_array(self) -> np.ndarray:
        """Edges as an (m, 2) integer array."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64)

    def weight_array(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.num_edges)
        return np.asarray(self.weights, dtype=float)

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric adjacency matrix (w_ij) with zero diagonal."""
        e = self.edge_array()
        w = self.weight_array()
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.concatenate([w, w])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def laplacian(self) -> sp.csr_matrix:
        """Graph Laplacian D - A."""
        a = self.adjacency()
        return (sp.diags(np.asarray(a.sum(axis=1)).ravel()) - a).tocsr()


# ════════════════════════════════════════════════════════════
# SAMPLERS
# ════════════════════════════════════════════════════════════

def _check_parameters(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise GraphParameterError(f"n and d must be positive (got n={n}, d={d})")
    if (n * d) % 2 != 0:
        raise GraphParameterError(f"n * d must be even (got n={n}, d={d})")
    if d >= n:
        raise GraphParameterError(f"d must be smaller than n (got n={n}, d={d})")


def _pair_all_stubs(n: int, d: int, rng: np.random.Generator) -> Optional[List[Edge]]:
    """One configuration-model draw; None if any pair is a loop or a multi-edge."""
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    if np.any(lo == hi):
        return None
    keys = lo * n + hi
    if np.unique(keys).size != keys.size:
        return None
    return list(zip(lo.tolist(), hi.tolist()))


def _pair_with_repair(n: int, d: int, rng: np.random.Generator) -> Optional[List[Edge]]:
    """
    Pair stubs, then re-pair only the stubs that landed in a loop or a
    multi-edge. Returns None when the leftover stubs admit no valid pair.
    """
    edges = set()
    stubs = np.repeat(np.arange(n), d)

    while stubs.size:
        rng.shuffle(stubs)
        leftover = []
        for s1, s2 in stubs.reshape(-1, 2).tolist():
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover.extend((s1, s2))

        if leftover and not _has_suitable_pair(edges, leftover):
            return None
        stubs = np.asarray(leftover, dtype=np.int64)

    return sorted(edges)


def _has_suitable_pair(edges: set, leftover: List[int]) -> bool:
    vertices = sorted(set(leftover))
    for a_idx, a in enumerate(vertices):
        for b in vertices[a_idx + 1:]:
            if (a, b) not in edges:
                return True
    return False


def _resolve_sampler(d: int, sampler: Optional[str]) -> str:
    sampler = sampler or GRAPH_SAMPLER
    if sampler == "auto":
        return "configuration" if d <= GRAPH_REPAIR_MAX_DEGREE else "stub_repair"
    if sampler not in ("configuration", "stub_repair"):
        raise GraphParameterError(f"Unknown sampler: {sampler}")
    return sampler


def generate_regular(n: int, d: int, seed: int, sampler: Optional[str] = None,
                     max_restarts: int = GRAPH_MAX_RESTARTS) -> Graph:
    """
    Sample a simple d-regular graph on n vertices.

    Args:
        n: Vertex count
        d: Degree, with n * d even and d < n
        seed: 64-bit seed; the output is a pure function of (n, d, seed, sampler)
        sampler: "configuration", "stub_repair" or "auto" (config default)
        max_restarts: Whole-sample restart budget

    Returns:
        Graph with n * d / 2 edges, every degree equal to d
    """
    _check_parameters(n, d)
    method = _resolve_sampler(d, sampler)
    rng = np.random.default_rng(seed)
    draw = _pair_all_stubs if method == "configuration" else _pair_with_repair

    for attempt in range(max_restarts):
        edges = draw(n, d, rng)
        if edges is not None:
            if attempt:
                logger.debug("Regular graph n=%d d=%d accepted after %d restarts", n, d, attempt)
            return Graph.from_edges(n, sorted(edges), d=d, seed=seed)

    raise GraphGenerationError(
        f"No simple {d}-regular graph on {n} vertices after {max_restarts} restarts "
        f"(sampler={method}, seed={seed})"
    )


# ════════════════════════════════════════════════════════════
# CUT EVALUATION
# ════════════════════════════════════════════════════════════

def as_spins(x, n: int) -> np.ndarray:
    """Validate and return a +/-1 integer vector of length n."""
    spins = np.asarray(x)
    if spins.shape != (n,):
        raise GraphParameterError(f"Spin vector has shape {spins.shape}, expected ({n},)")
    if not np.all((spins == 1) | (spins == -1)):
        raise GraphParameterError("Spin entries must be exactly +1 or -1")
    return spins.astype(np.int64)


def cut_value(g: Graph, x) -> Union[int, float]:
    """
    Total weight of edges whose endpoints carry different spins.

    Integer-valued for unit-weight graphs; equals 1/4 x^T L x.
    """
    spins = as_spins(x, g.n)
    if not g.edges:
        return 0
    e = g.edge_array()
    crossing = spins[e[:, 0]] != spins[e[:, 1]]
    if g.weights is None:
        return int(np.count_nonzero(crossing))
    return float(g.weight_array()[crossing].sum())
